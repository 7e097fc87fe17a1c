//! Polyatomic six-moment and eleven-moment (ellipsoidal Gaussian) closures
//! with a nonequilibrium internal-mode temperature `T^I`.

use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::gaussian::GaussianParams;
use super::Distribution;
use crate::basis::GasModel;
use crate::error::{Error, Result};
use crate::numerics::adaptive::{self, Tolerance};

/// Specific internal-mode energy `eps^I_E(T)`.
#[derive(Clone)]
pub enum InternalEnergy {
    /// `eps^I = ((D - 3)/2) (kB/m) T`
    Polytropic { d: f64 },
    /// Monotone cubic (Fritsch–Carlson) interpolation of `(T, eps^I)` samples;
    /// linear extrapolation through the origin below the first sample.
    Tabulated(Pchip),
    /// User-supplied monotone increasing function with `eps^I(0) = 0`.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for InternalEnergy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InternalEnergy::Polytropic { d } => write!(f, "Polytropic {{ d: {d} }}"),
            InternalEnergy::Tabulated(p) => write!(f, "Tabulated({} points)", p.x.len()),
            InternalEnergy::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Caloric equations of state of a polyatomic gas.
#[derive(Debug, Clone)]
pub struct PolyatomicEos {
    /// `kB / m`
    pub r: f64,
    pub internal: InternalEnergy,
    pub a0: f64,
    pub t_ref: f64,
}

impl PolyatomicEos {
    pub fn polytropic(d: f64, gas: &GasModel) -> Result<Self> {
        if !(d > 3.0) {
            return Err(Error::InvalidInput(format!("polytropic D must exceed 3, got {d}")));
        }
        Ok(PolyatomicEos {
            r: gas.r(),
            internal: InternalEnergy::Polytropic { d },
            a0: 1.0,
            t_ref: 1.0,
        })
    }

    pub fn eps_k(&self, t: f64) -> f64 {
        1.5 * self.r * t
    }

    pub fn eps_i(&self, t: f64) -> f64 {
        match &self.internal {
            InternalEnergy::Polytropic { d } => 0.5 * (d - 3.0) * self.r * t,
            InternalEnergy::Tabulated(p) => p.eval(t),
            InternalEnergy::Custom(f) => f(t),
        }
    }

    /// `d eps^I / dT`.
    pub fn cv_i(&self, t: f64) -> f64 {
        match &self.internal {
            InternalEnergy::Polytropic { d } => 0.5 * (d - 3.0) * self.r,
            InternalEnergy::Tabulated(p) => p.derivative(t),
            InternalEnergy::Custom(f) => {
                let h = 1e-6 * t.max(1e-12);
                (f(t + h) - f(t - h)) / (2.0 * h)
            }
        }
    }

    /// Gas model whose `phi(I)` reproduces this (polytropic) equation of state.
    pub fn gas_model(&self, base: &GasModel) -> Result<GasModel> {
        let InternalEnergy::Polytropic { d } = self.internal else {
            return Err(Error::InvalidInput(
                "an internal-energy weight phi(I) is only available for polytropic gases".into(),
            ));
        };
        let mut g = base.clone();
        g.set_internal((d - 5.0) / 2.0, self.a0, self.t_ref)?;
        Ok(g)
    }
}

/// Monotone piecewise-cubic Hermite interpolant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::InvalidInput("tabulated data needs at least two (x, y) pairs".into()));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) || y.windows(2).any(|w| w[1] < w[0]) || x[0] <= 0.0 {
            return Err(Error::InvalidInput(
                "tabulated temperatures must be positive and increasing, energies nondecreasing".into(),
            ));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let del: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d = vec![del[0]; 2];
        } else {
            for k in 1..n - 1 {
                if del[k - 1] * del[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
                }
            }
            d[0] = end_slope(h[0], h[1], del[0], del[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        }
        Ok(Pchip { x, y, d })
    }

    fn segment(&self, t: f64) -> usize {
        match self.x.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(k) => k.min(self.x.len() - 2),
            Err(k) => k.clamp(1, self.x.len() - 1) - 1,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return self.y[0] * t / self.x[0];
        }
        if t >= self.x[n - 1] {
            return self.y[n - 1] + self.d[n - 1] * (t - self.x[n - 1]);
        }
        let k = self.segment(t);
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s),
            s * (1.0 - s) * (1.0 - s),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        h00 * self.y[k] + h10 * h * self.d[k] + h01 * self.y[k + 1] + h11 * h * self.d[k + 1]
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return self.y[0] / self.x[0];
        }
        if t >= self.x[n - 1] {
            return self.d[n - 1];
        }
        let k = self.segment(t);
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (d00, d10, d01, d11) = (6.0 * s * s - 6.0 * s, 3.0 * s * s - 4.0 * s + 1.0, -6.0 * s * s + 6.0 * s, 3.0 * s * s - 2.0 * s);
        (d00 * self.y[k] + d01 * self.y[k + 1]) / h + d10 * self.d[k] + d11 * self.d[k + 1]
    }
}

fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        0.0
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}

/// Solves `eps^I(T) - eps^I(T^I) = (Pi/p) eps^K(T)` for `T^I`.
pub fn solve_ti(t: f64, pi_over_p: f64, eos: &PolyatomicEos) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!("temperature must be positive, got {t}")));
    }
    let ek = eos.eps_k(t);
    let ei = eos.eps_i(t);
    let upper = ei / ek;
    if !(pi_over_p > -1.0 && pi_over_p < upper) {
        return Err(Error::OutOfBounds(format!(
            "Pi/p = {pi_over_p} outside the admissible interval (-1, {upper})"
        )));
    }
    if pi_over_p == 0.0 {
        return Ok(t);
    }
    let target = ei - pi_over_p * ek;
    let res = |x: f64| eos.eps_i(x) - target;
    let tol = 1e-12 * ek;
    // Bracket: res is increasing in T^I.
    let (mut lo, mut hi) = if pi_over_p > 0.0 { (0.0, t) } else { (t, 2.0 * t) };
    while res(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::OutOfBounds("no internal temperature reproduces the dynamic pressure".into()));
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let r = res(x);
        if r.abs() <= tol {
            return Ok(x);
        }
        if r > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let c = eos.cv_i(x);
        let newton = x - r / c;
        x = if c > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let r = res(x);
    if r.abs() <= tol {
        Ok(x)
    } else {
        Err(Error::MaxIterations { iterations: 200, residual: r.abs() / ek })
    }
}

/// `A(T^I) = A0 exp((m/kB) int_{T_ref}^{T^I} eps^I(x)/x^2 dx)`.
pub fn normalization_a(t_i: f64, eos: &PolyatomicEos, t_ref: f64, a0: f64) -> Result<f64> {
    if !(t_i > 0.0 && t_ref > 0.0) {
        return Err(Error::InvalidInput("T^I and T_ref must be positive".into()));
    }
    if t_i == t_ref {
        return Ok(a0);
    }
    let (lo, hi, sign) = if t_i > t_ref { (t_ref, t_i, 1.0) } else { (t_i, t_ref, -1.0) };
    // Logarithmic variable: int eps(e^s) e^{-s} ds.
    let est = adaptive::integrate(
        |s: f64| eos.eps_i(s.exp()) * (-s).exp(),
        lo.ln(),
        hi.ln(),
        Tolerance {
            rel: 1e-14,
            abs: 0.0,
            max_intervals: 2000,
        },
    )?;
    Ok(a0 * (sign * est.value / eos.r).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct F6Params {
    pub rho: f64,
    pub v: [f64; 3],
    pub t: f64,
    pub pi: f64,
    pub t_i: f64,
    pub a: f64,
}

/// Six-moment closure distribution.
#[derive(Debug, Clone)]
pub struct F6 {
    pub params: F6Params,
    norm: f64,
    /// `rho / (p + Pi)`
    inv_var: f64,
    kt_i: f64,
}

impl Distribution for F6 {
    fn value(&self, xi: &[f64; 3], energy: f64) -> f64 {
        let v = &self.params.v;
        let c2 = (xi[0] - v[0]).powi(2) + (xi[1] - v[1]).powi(2) + (xi[2] - v[2]).powi(2);
        self.norm * (-0.5 * c2 * self.inv_var - energy / self.kt_i).exp()
    }
}

impl F6 {
    /// Kinetic temperature from the second central moment, `T (p+Pi)/p`.
    pub fn kinetic_temperature(&self, gas: &GasModel) -> f64 {
        1.0 / (self.inv_var * gas.r())
    }
}

pub fn polyatomic_f6(rho: f64, v: [f64; 3], t: f64, pi: f64, eos: &PolyatomicEos, gas: &GasModel) -> Result<F6> {
    if !(rho > 0.0 && t > 0.0) {
        return Err(Error::DegenerateState("six-moment closure needs rho > 0 and T > 0".into()));
    }
    let p = rho * gas.r() * t;
    let t_i = solve_ti(t, pi / p, eos)?;
    let a = normalization_a(t_i, eos, eos.t_ref, eos.a0)?;
    let inv_var = rho / (p + pi);
    let norm = rho / (gas.m * (2.0 * std::f64::consts::PI).powf(1.5) * a) * inv_var.powf(1.5);
    Ok(F6 {
        params: F6Params { rho, v, t, pi, t_i, a },
        norm,
        inv_var,
        kt_i: gas.kb * t_i,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct F11Params {
    pub rho: f64,
    pub v: [f64; 3],
    pub p: [[f64; 3]; 3],
    pub t_i: f64,
    pub a: f64,
}

/// Eleven-moment ellipsoidal Gaussian.
#[derive(Debug, Clone)]
pub struct F11 {
    pub params: F11Params,
    inv: Matrix3<f64>,
    norm: f64,
    kt_i: f64,
}

impl Distribution for F11 {
    fn value(&self, xi: &[f64; 3], energy: f64) -> f64 {
        let v = &self.params.v;
        let c = Vector3::new(xi[0] - v[0], xi[1] - v[1], xi[2] - v[2]);
        self.norm * (-0.5 * c.dot(&(self.inv * c)) - energy / self.kt_i).exp()
    }
}

pub fn ellipsoidal_gaussian_11(
    rho: f64,
    v: [f64; 3],
    p: [[f64; 3]; 3],
    t_i: f64,
    eos: &PolyatomicEos,
    gas: &GasModel,
) -> Result<F11> {
    if !(t_i > 0.0) {
        return Err(Error::InvalidInput(format!("T^I must be positive, got {t_i}")));
    }
    let gp = GaussianParams { rho, v, p };
    gp.validate()?;
    let theta = gp.pressure() / rho;
    let inv = theta
        .try_inverse()
        .ok_or_else(|| Error::NotPositiveDefinite("pressure tensor is singular".into()))?;
    let a = normalization_a(t_i, eos, eos.t_ref, eos.a0)?;
    let norm = rho / (gas.m * (2.0 * std::f64::consts::PI).powf(1.5) * theta.determinant().sqrt() * a);
    Ok(F11 {
        params: F11Params { rho, v, p, t_i, a },
        inv,
        norm,
        kt_i: gas.kb * t_i,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pchip_interpolates_and_is_monotone() {
        let x = vec![0.5, 1.0, 2.0, 4.0];
        let y = vec![0.5, 1.2, 2.0, 5.0];
        let p = Pchip::new(x.clone(), y.clone()).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((p.eval(*a) - b).abs() < 1e-14);
        }
        let mut prev = p.eval(0.5);
        for k in 1..400 {
            let t = 0.5 + k as f64 * 0.01;
            let v = p.eval(t);
            assert!(v >= prev - 1e-14);
            prev = v;
        }
    }
}
