//! Jüttner equilibrium and its number density, energy density and pressure.

use serde::Serialize;

use super::integrals::{i_nu_report, j_from_i, Regime, RegimeChoice};
use super::RelGas;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelEquilibrium {
    pub alpha: f64,
    pub gamma: f64,
    pub temperature: f64,
    pub n: f64,
    pub e: f64,
    pub p: f64,
    /// Regime the `I_nu` evaluations were dispatched to.
    pub regime: Regime,
}

/// Minkowski product with signature `(+, -, -, -)`.
pub fn minkowski(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

/// `n = 4 pi Y m^3 c^3 J_21`, `e = 4 pi Y m^4 c^5 J_22`,
/// `p = 4/3 pi Y m^4 c^5 J_40`.
pub fn equilibrium_state(alpha: f64, gamma: f64, gas: &RelGas) -> Result<RelEquilibrium> {
    let regime = i_nu_report(0, alpha, gamma, gas, RegimeChoice::Auto)?.regime;
    let j = |mu, nu| -> Result<f64> { Ok(j_from_i(mu, nu, alpha, gamma, gas)?.expect("listed pair")) };
    let (m, c, y) = (gas.m, gas.c, gas.y);
    let four_pi = 4.0 * std::f64::consts::PI;
    let n = four_pi * y * m.powi(3) * c.powi(3) * j(2, 1)?;
    let e = four_pi * y * m.powi(4) * c.powi(5) * j(2, 2)?;
    let p = four_pi / 3.0 * y * m.powi(4) * c.powi(5) * j(4, 0)?;
    if !(n > 0.0 && p > 0.0 && e > 0.0) {
        return Err(Error::DegenerateState(format!(
            "equilibrium densities are not positive (n = {n:e}, e = {e:e}, p = {p:e})"
        )));
    }
    Ok(RelEquilibrium {
        alpha,
        gamma,
        temperature: gas.temperature(gamma),
        n,
        e,
        p,
        regime,
    })
}

/// `f_J = Y / (exp(m alpha / kB + U.p / (kB T)) + s)` for an on-shell momentum.
pub fn juttner(alpha: f64, gamma: f64, u: &[f64; 4], p: &[f64; 4], gas: &RelGas) -> Result<f64> {
    gas.validate()?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidInput(format!("coldness gamma must be positive, got {gamma}")));
    }
    let c2 = gas.c * gas.c;
    let expected = gas.m * gas.m * c2;
    let norm = minkowski(p, p);
    if !((norm - expected).abs() <= 1e-10 * expected) || p[0] <= 0.0 {
        return Err(Error::OffMassShell { norm, expected });
    }
    let uu = minkowski(u, u);
    if !((uu - c2).abs() <= 1e-10 * c2) || u[0] <= 0.0 {
        return Err(Error::StateConstraintViolation(format!("U.U = {uu}, expected c^2 = {c2}")));
    }
    let kt = gas.kb * gas.temperature(gamma);
    let x = gas.reduced_fugacity(alpha) + minkowski(u, p) / kt;
    let s = gas.statistics.s();
    if s < 0.0 && !(x > 0.0) {
        return Err(Error::DomainError { chi: x });
    }
    let occ = if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + s * e)
    } else {
        1.0 / (x.exp() + s)
    };
    Ok(gas.y * occ)
}
