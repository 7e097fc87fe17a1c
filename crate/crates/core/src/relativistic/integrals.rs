//! The families `I_nu(alpha, gamma)` and `J_{mu,nu}(alpha, gamma)`.
//!
//! `I_nu = int_0^inf cosh(nu rho) / (exp(a + gamma cosh rho) + s) drho`,
//! `J_{mu,nu}` the same with `sinh^mu rho cosh^nu rho` in the numerator,
//! where `s = -1, 0, +1` for Bose, Boltzmann and Fermi particles.

use serde::{Deserialize, Serialize};

use super::RelGas;
use crate::error::{Error, Result};
use crate::numerics::adaptive::{integrate_with_breaks, integrate_tail, Tolerance};
use crate::numerics::bessel::bessel_k_scaled;

/// Smallest `a` at which the Bessel form is accepted for quantum statistics.
pub const NONDEGENERATE_MIN_A: f64 = 15.0;
/// Auto selection also asks `a + gamma` to reach this, so that the dropped
/// terms are below `1e-12` relative.
pub const NONDEGENERATE_AUTO_SUM: f64 = 28.0;
/// Largest `exp(-(a + gamma))` for which the Bose series is used.
pub const BOSE_SERIES_MAX_Z: f64 = 1.0 - 1e-6;
pub const BOSE_SERIES_MAX_TERMS: usize = 2_000_000;
/// Quadrature tails are cut where the integrand is below this fraction of
/// its peak.
pub const TAIL_CUTOFF: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    NonDegenerate,
    StrongFermi,
    CompleteFermi,
    CompleteBose,
    Numeric,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::NonDegenerate => "NON_DEGENERATE",
            Regime::StrongFermi => "STRONG_FERMI",
            Regime::CompleteFermi => "COMPLETE_FERMI",
            Regime::CompleteBose => "COMPLETE_BOSE",
            Regime::Numeric => "NUMERIC",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "NON_DEGENERATE" => Ok(Regime::NonDegenerate),
            "STRONG_FERMI" => Ok(Regime::StrongFermi),
            "COMPLETE_FERMI" => Ok(Regime::CompleteFermi),
            "COMPLETE_BOSE" => Ok(Regime::CompleteBose),
            "NUMERIC" => Ok(Regime::Numeric),
            _ => Err(Error::InvalidInput(format!("unknown regime '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RegimeChoice {
    #[default]
    Auto,
    Forced(Regime),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IValue {
    pub value: f64,
    pub regime: Regime,
    pub method: &'static str,
    /// Series terms summed, for the Bose series.
    pub terms: Option<usize>,
}

fn check_args(a: f64, gamma: f64, s: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidInput(format!("coldness gamma must be positive, got {gamma}")));
    }
    if !a.is_finite() {
        return Err(Error::InvalidInput(format!("fugacity must be finite, got {a}")));
    }
    if s < 0.0 && !(a + gamma > 0.0) {
        return Err(Error::DomainError { chi: a + gamma });
    }
    Ok(())
}

/// `1 / (e^x + s)` without overflow.
fn occupation(x: f64, s: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + s * e)
    } else {
        1.0 / (x.exp() + s)
    }
}

/// `d/dx (1 / (e^x + s)) = -occ (1 - s occ)`.
fn occupation_derivative(x: f64, s: f64) -> f64 {
    let o = occupation(x, s);
    -o * (1.0 - s * o)
}

/// `int_0^inf w(rho) g(a + gamma cosh rho) drho`, split at the Fermi edge.
fn rho_integral<W: Fn(f64) -> f64, G: Fn(f64, f64) -> f64>(w: W, g: G, a: f64, gamma: f64, s: f64) -> Result<f64> {
    let f = |r: f64| w(r) * g(a + gamma * r.cosh(), s);
    let tol = Tolerance::default();
    let ratio = -a / gamma;
    let (start, head, width) = if ratio > 1.0 {
        let rf = ratio.acosh();
        let head = integrate_with_breaks(f, &[0.0, rf], tol)?.value;
        let width = (8.0 / (gamma * rf.sinh())).clamp(1e-3, 1.0);
        (rf, head, width)
    } else {
        (0.0, 0.0, 1.0)
    };
    let tail = integrate_tail(f, start, width, tol, TAIL_CUTOFF)?;
    Ok(head + tail.value)
}

fn i_quadrature(nu: u32, a: f64, gamma: f64, s: f64) -> Result<f64> {
    rho_integral(|r| (nu as f64 * r).cosh(), occupation, a, gamma, s)
}

fn i_bessel(nu: u32, a: f64, gamma: f64) -> f64 {
    bessel_k_scaled(nu, gamma) * (-(a + gamma)).exp()
}

fn rho_fermi(a: f64, gamma: f64, regime: Regime) -> Result<f64> {
    let ratio = a / gamma;
    if !(ratio < -1.0) {
        return Err(Error::RegimeMismatch {
            regime: regime.name().into(),
            reason: format!("needs m alpha / (kB gamma) < -1, got {ratio}"),
        });
    }
    Ok((-ratio).acosh())
}

/// `sinh(nu rho) / nu`, with the `nu = 0` limit.
fn sinh_over(nu: u32, r: f64) -> f64 {
    if nu == 0 {
        r
    } else {
        (nu as f64 * r).sinh() / nu as f64
    }
}

/// First Sommerfeld correction `X`.
fn sommerfeld_x(nu: u32, rf: f64, gamma: f64) -> f64 {
    let n = nu as f64;
    let pre = std::f64::consts::PI.powi(2) / (6.0 * gamma * gamma);
    // nu / sinh(nu rho_F) -> 1 / rho_F as nu -> 0
    let nu_over_sinh = if nu == 0 { 1.0 / rf } else { n / (n * rf).sinh() };
    let num = n * (n * rf).sinh() * rf.sinh() - (n * rf).cosh() * rf.cosh();
    pre * nu_over_sinh * num / rf.sinh().powi(3)
}

fn bose_series(nu: u32, a: f64, gamma: f64) -> Result<(f64, usize)> {
    let lz = -(a + gamma);
    let z = lz.exp();
    if !(z < BOSE_SERIES_MAX_Z) {
        return Err(Error::SeriesDivergence(format!(
            "Bose series parameter exp(-(a + gamma)) = {z} is not below {BOSE_SERIES_MAX_Z}"
        )));
    }
    let expected = (14.0 * std::f64::consts::LN_10 / -lz).ceil();
    if expected > BOSE_SERIES_MAX_TERMS as f64 {
        return Err(Error::SeriesDivergence(format!(
            "Bose series needs about {expected:e} terms at exp(-(a + gamma)) = {z}"
        )));
    }
    let mut sum = 0.0;
    for r in 1..=BOSE_SERIES_MAX_TERMS {
        let rf = r as f64;
        let term = (rf * lz).exp() * bessel_k_scaled(nu, rf * gamma);
        sum += term;
        if term <= 1e-14 * sum {
            return Ok((sum, r));
        }
    }
    Err(Error::SeriesDivergence("Bose series did not reach 1e-14 relative".into()))
}

fn evaluate(nu: u32, a: f64, gamma: f64, s: f64, regime: Regime) -> Result<IValue> {
    let out = |value, method, terms| IValue {
        value,
        regime,
        method,
        terms,
    };
    match regime {
        Regime::NonDegenerate => {
            if s != 0.0 && a < NONDEGENERATE_MIN_A {
                return Err(Error::RegimeMismatch {
                    regime: regime.name().into(),
                    reason: format!("quantum statistics need m alpha / kB >= {NONDEGENERATE_MIN_A}, got {a}"),
                });
            }
            Ok(out(i_bessel(nu, a, gamma), "bessel", None))
        }
        Regime::StrongFermi | Regime::CompleteFermi => {
            if s != 1.0 {
                return Err(Error::RegimeMismatch {
                    regime: regime.name().into(),
                    reason: "degenerate Fermi forms need Fermi statistics".into(),
                });
            }
            let rf = rho_fermi(a, gamma, regime)?;
            let base = sinh_over(nu, rf);
            if regime == Regime::CompleteFermi {
                Ok(out(base, "closed_form", None))
            } else {
                Ok(out(base * (1.0 + sommerfeld_x(nu, rf, gamma)), "sommerfeld", None))
            }
        }
        Regime::CompleteBose => {
            if s != -1.0 {
                return Err(Error::RegimeMismatch {
                    regime: regime.name().into(),
                    reason: "the Bose series needs Bose statistics".into(),
                });
            }
            let (v, n) = bose_series(nu, a, gamma)?;
            Ok(out(v, "series", Some(n)))
        }
        Regime::Numeric => Ok(out(i_quadrature(nu, a, gamma, s)?, "quadrature", None)),
    }
}

/// `I_nu` with its regime and method.
pub fn i_nu_report(nu: u32, alpha: f64, gamma: f64, gas: &RelGas, choice: RegimeChoice) -> Result<IValue> {
    gas.validate()?;
    let a = gas.reduced_fugacity(alpha);
    let s = gas.statistics.s();
    match choice {
        RegimeChoice::Forced(r) => {
            // outside the Bose domain the series reports its own divergence
            let domain_s = if r == Regime::CompleteBose { 0.0 } else { s };
            check_args(a, gamma, domain_s)?;
            evaluate(nu, a, gamma, s, r)
        }
        RegimeChoice::Auto => {
            check_args(a, gamma, s)?;
            if s == 0.0 || (a >= NONDEGENERATE_MIN_A && a + gamma >= NONDEGENERATE_AUTO_SUM) {
                return evaluate(nu, a, gamma, s, Regime::NonDegenerate);
            }
            if s == -1.0 {
                match evaluate(nu, a, gamma, s, Regime::CompleteBose) {
                    Err(Error::SeriesDivergence(msg)) => log::debug!("falling back to quadrature: {msg}"),
                    other => return other,
                }
            }
            evaluate(nu, a, gamma, s, Regime::Numeric)
        }
    }
}

pub fn i_nu(nu: u32, alpha: f64, gamma: f64, gas: &RelGas, choice: RegimeChoice) -> Result<f64> {
    Ok(i_nu_report(nu, alpha, gamma, gas, choice)?.value)
}

fn sinh_cosh(mu: u32, nu: u32, r: f64) -> f64 {
    crate::basis::ipow(r.sinh(), mu) * crate::basis::ipow(r.cosh(), nu)
}

/// `J_{mu,nu}` by adaptive quadrature.
pub fn j_munu(mu: u32, nu: u32, alpha: f64, gamma: f64, gas: &RelGas) -> Result<f64> {
    gas.validate()?;
    let a = gas.reduced_fugacity(alpha);
    let s = gas.statistics.s();
    check_args(a, gamma, s)?;
    rho_integral(|r| sinh_cosh(mu, nu, r), occupation, a, gamma, s)
}

pub(crate) fn i_table(alpha: f64, gamma: f64, gas: &RelGas) -> Result<[f64; 7]> {
    let mut i = [0.0; 7];
    for (k, v) in i.iter_mut().enumerate() {
        *v = i_nu(k as u32, alpha, gamma, gas, RegimeChoice::Auto)?;
    }
    Ok(i)
}

/// `J_{mu,nu}` from the `I_nu` relations, for the pairs that have one.
pub fn j_from_i(mu: u32, nu: u32, alpha: f64, gamma: f64, gas: &RelGas) -> Result<Option<f64>> {
    if !matches!((mu, nu), (2, 1) | (2, 2) | (4, 0) | (4, 1)) {
        return Ok(None);
    }
    let i = i_table(alpha, gamma, gas)?;
    Ok(Some(match (mu, nu) {
        (2, 1) => (i[3] - i[1]) / 4.0,
        (2, 2) => (i[4] - i[0]) / 8.0,
        (4, 0) => (i[4] - 4.0 * i[2] + 3.0 * i[0]) / 8.0,
        _ => (i[5] - 3.0 * i[3] + 2.0 * i[1]) / 16.0,
    }))
}

/// `dJ_{mu,nu}/d alpha` by quadrature of the differentiated integrand.
pub fn j_prime_quadrature(mu: u32, nu: u32, alpha: f64, gamma: f64, gas: &RelGas) -> Result<f64> {
    gas.validate()?;
    let a = gas.reduced_fugacity(alpha);
    let s = gas.statistics.s();
    check_args(a, gamma, s)?;
    let d = rho_integral(|r| sinh_cosh(mu, nu, r), occupation_derivative, a, gamma, s)?;
    Ok(gas.m / gas.kb * d)
}

/// `dJ_{mu,nu}/d alpha`, through the `I_nu` relations where one exists and
/// by quadrature otherwise.
pub fn j_prime(mu: u32, nu: u32, alpha: f64, gamma: f64, gas: &RelGas) -> Result<f64> {
    let listed = matches!(
        (mu, nu),
        (2, 1) | (2, 2) | (2, 3) | (2, 4) | (4, 0) | (4, 1) | (4, 2) | (4, 3) | (6, 0) | (6, 1)
    );
    if !listed {
        return j_prime_quadrature(mu, nu, alpha, gamma, gas);
    }
    let i = i_table(alpha, gamma, gas)?;
    Ok(j_prime_from_i(mu, nu, &i, gas.m / (gas.kb * gamma)).expect("listed pair"))
}

/// The `J'` relations, with `k = m / (kB gamma)`.
pub(crate) fn j_prime_from_i(mu: u32, nu: u32, i: &[f64; 7], k: f64) -> Option<f64> {
    Some(match (mu, nu) {
        (2, 1) => -k * i[2],
        (2, 2) => -k / 4.0 * (3.0 * i[3] + i[1]),
        (2, 3) => -k / 2.0 * (i[4] + i[2]),
        (2, 4) => -k / 16.0 * (5.0 * i[5] + 9.0 * i[3] + 2.0 * i[1]),
        (4, 0) => -3.0 * k / 4.0 * (i[3] - i[1]),
        (4, 1) => -k / 2.0 * (i[4] - i[2]),
        (4, 2) => -k / 16.0 * (5.0 * i[5] - 3.0 * i[3] - 2.0 * i[1]),
        (4, 3) => -3.0 * k / 16.0 * (i[6] - i[2]),
        (6, 0) => -5.0 * k / 16.0 * (i[5] - 3.0 * i[3] + 2.0 * i[1]),
        (6, 1) => -k / 32.0 * (6.0 * i[6] - 16.0 * i[4] + 10.0 * i[2]),
        _ => return None,
    })
}
