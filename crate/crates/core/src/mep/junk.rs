//! Continuation along a straight moment-space path for the one-dimensional
//! five-moment problem (`1, xi, ..., xi^4`), locating where the dual solve
//! stops producing a resolved, admissible closure.

use nalgebra::Matrix3;
use serde::Serialize;

use super::solver::{solve_multipliers_report, SolverOptions};
use crate::basis::{GasModel, MomentBasis, MomentVector, Quadrature};
use crate::error::{Error, Result};

/// Relative moment mismatch tolerated when the converged closure is
/// re-integrated on a grid of twice the order.
pub const RESOLUTION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct ProbeStep {
    pub step: usize,
    pub parameter: f64,
    pub converged: bool,
    /// `|Lambda|` of the converged solution (NaN on failure).
    pub multiplier_norm: f64,
    /// Leading form maximum; in 1D `a_N = -Lambda_4` (NaN when unknown).
    pub a_n: f64,
    /// Determinant of the 3x3 Hankel matrix of the target; positive inside
    /// the positive-density region.
    pub hankel_det: f64,
    pub message: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RealizabilityReport {
    pub steps: Vec<ProbeStep>,
    /// Largest sampled parameter with a successful solve before the first failure.
    pub last_realizable: Option<f64>,
    pub first_failure: Option<f64>,
    /// Bisected failure location (midpoint of the final bracket).
    pub boundary: Option<f64>,
    /// Width of the final bracket.
    pub resolution: Option<f64>,
    /// True when no success follows a failure along the sampled ray.
    pub monotone: bool,
    /// Smallest Hankel determinant on the path.
    pub min_hankel_det: f64,
}

/// A path `u(t) = (1 - t) start + t end`, `t` in `[0, 1]`.
#[derive(Debug, Clone, Serialize)]
pub struct JunkPath {
    pub start: MomentVector,
    pub end: MomentVector,
}

impl JunkPath {
    /// The documented probe: unit density, zero velocity, unit temperature,
    /// normalized fourth moment 4, normalized third moment raised from -1 to 0.
    pub fn documented() -> Self {
        let b = MomentBasis::line(4);
        JunkPath {
            start: MomentVector::new(b.clone(), vec![1.0, 0.0, 1.0, -1.0, 4.0]).expect("five values"),
            end: MomentVector::new(b, vec![1.0, 0.0, 1.0, 0.0, 4.0]).expect("five values"),
        }
    }

    pub fn at(&self, t: f64) -> MomentVector {
        let values = self
            .start
            .values
            .iter()
            .zip(&self.end.values)
            .map(|(a, b)| (1.0 - t) * a + t * b)
            .collect();
        MomentVector {
            basis: self.start.basis.clone(),
            values,
        }
    }
}

pub fn hankel_det(m: &[f64]) -> f64 {
    Matrix3::new(m[0], m[1], m[2], m[1], m[2], m[3], m[2], m[3], m[4]).determinant()
}

/// Outcome of a single cold solve at one path point.
pub fn probe_point(target: &MomentVector, gas: &GasModel, quad: &Quadrature, fine: &Quadrature) -> ProbeStep {
    let opts = SolverOptions::default();
    let hd = hankel_det(&target.values);
    let mut step = ProbeStep {
        step: 0,
        parameter: 0.0,
        converged: false,
        multiplier_norm: f64::NAN,
        a_n: f64::NAN,
        hankel_det: hd,
        message: None,
    };
    match solve_multipliers_report(target, gas, quad, &opts) {
        Ok(rep) => {
            step.multiplier_norm = rep.multipliers.norm();
            step.a_n = rep.admissibility.a_n;
            match resolved(&rep.multipliers, target, gas, fine) {
                Ok(()) => step.converged = true,
                Err(msg) => step.message = Some(msg),
            }
        }
        Err(e) => {
            if let Error::NotRealizable { a_n, multiplier_norm, .. } = &e {
                step.a_n = *a_n;
                step.multiplier_norm = *multiplier_norm;
            }
            step.message = Some(e.to_string());
        }
    }
    step
}

fn resolved(
    lambda: &super::MultiplierVector,
    target: &MomentVector,
    gas: &GasModel,
    fine: &Quadrature,
) -> std::result::Result<(), String> {
    let f = |xi: &[f64; 3], e: f64| lambda.distribution(xi, e, gas).unwrap_or(f64::NAN);
    let check = crate::basis::compute_moments(f, &target.basis, fine, gas).map_err(|e| e.to_string())?;
    let mac = target.macroscopic(gas).map_err(|e| e.to_string())?;
    let c = mac.theta.sqrt() + mac.v.norm();
    for (k, (a, b)) in check.values.iter().zip(&target.values).enumerate() {
        let scale = mac.rho * c.powi(target.basis.elements[k].velocity_degree() as i32);
        if (a - b).abs() > RESOLUTION_TOL * scale {
            return Err(format!(
                "closure not resolved: moment {k} differs by {:e} on the refined grid",
                (a - b).abs() / scale
            ));
        }
    }
    Ok(())
}

fn refined(quad: &Quadrature, gas: &GasModel) -> Result<Quadrature> {
    Quadrature::new(quad.dim, 2 * quad.order, quad.center, quad.scale, None, gas)
}

/// Probes `steps + 1` equally spaced points of the path, then bisects the
/// first success/failure bracket down to `resolution`.
pub fn realizability_probe_1d(
    path: &JunkPath,
    steps: usize,
    gas: &GasModel,
    quad: &Quadrature,
    resolution: f64,
) -> Result<RealizabilityReport> {
    let basis = &path.start.basis;
    if *basis != MomentBasis::line(4) || path.end.basis != *basis {
        return Err(Error::InvalidInput(
            "the probe runs on the one-dimensional basis 1, xi, ..., xi^4".into(),
        ));
    }
    if steps == 0 {
        return Err(Error::InvalidInput("need at least one step".into()));
    }
    let fine = refined(quad, gas)?;
    let mut out = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = k as f64 / steps as f64;
        let mut s = probe_point(&path.at(t), gas, quad, &fine);
        s.step = k;
        s.parameter = t;
        out.push(s);
    }
    let first_fail = out.iter().position(|s| !s.converged);
    let monotone = match first_fail {
        Some(k) => out[k..].iter().all(|s| !s.converged),
        None => true,
    };
    let min_hd = out.iter().map(|s| s.hankel_det).fold(f64::INFINITY, f64::min);
    let (mut last_ok, mut boundary, mut width) = (None, None, None);
    if let Some(k) = first_fail {
        if k > 0 {
            let (mut lo, mut hi) = (out[k - 1].parameter, out[k].parameter);
            while hi - lo > resolution {
                let mid = 0.5 * (lo + hi);
                if probe_point(&path.at(mid), gas, quad, &fine).converged {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            last_ok = Some(lo);
            boundary = Some(0.5 * (lo + hi));
            width = Some(hi - lo);
        }
    }
    Ok(RealizabilityReport {
        first_failure: first_fail.map(|k| out[k].parameter),
        steps: out,
        last_realizable: last_ok,
        boundary,
        resolution: width,
        monotone,
        min_hankel_det: min_hd,
    })
}

impl RealizabilityReport {
    /// CSV with columns `step,parameter,converged,multiplier_norm,a_N`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,parameter,converged,multiplier_norm,a_N\n");
        for p in &self.steps {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                p.step,
                crate::cli::fmt_num(p.parameter),
                u8::from(p.converged),
                crate::cli::fmt_num(p.multiplier_norm),
                crate::cli::fmt_num(p.a_n)
            ));
        }
        s
    }
}
