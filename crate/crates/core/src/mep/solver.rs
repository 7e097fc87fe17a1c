//! Damped Newton iteration on the convex dual.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::admissibility::{admissibility_check, basis_admits_closure, AdmissibilityReport};
use super::{equilibrium_from_macroscopic, Kernel, KernelEval, MultiplierVector};
use crate::basis::{GasModel, MomentVector, Quadrature, Statistics};
use crate::error::{Error, Result};
use crate::numerics::linalg;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Per-entry scaled residual tolerance.
    pub tol: f64,
    pub max_iterations: usize,
    pub armijo: f64,
    pub max_backtracks: usize,
    /// Multiplier norm beyond which the iteration is declared divergent.
    pub divergence_norm: f64,
    /// Optional starting point (defaults to the equilibrium projection).
    pub initial: Option<Vec<f64>>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-10,
            max_iterations: 200,
            armijo: 1e-4,
            max_backtracks: 60,
            divergence_norm: 1e8,
            initial: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub multipliers: MultiplierVector,
    pub iterations: usize,
    /// Final per-entry scaled residual.
    pub residual: f64,
    /// Condition number of the scaled dual Hessian at the solution.
    pub condition: f64,
    /// Number of iterations that needed a ridge.
    pub regularized_steps: usize,
    pub admissibility: AdmissibilityReport,
}

/// Per-entry residual scales `rho (sqrt(theta) + |v|)^deg`.
fn residual_scales(target: &MomentVector, gas: &GasModel) -> Result<DVector<f64>> {
    let mac = target.macroscopic(gas)?;
    let th = mac.theta.max(mac.theta_internal.unwrap_or(0.0));
    let c = th.sqrt() + mac.v.norm();
    Ok(DVector::from_iterator(
        target.basis.len(),
        target.basis.elements.iter().map(|e| mac.rho * c.powi(e.velocity_degree() as i32)),
    ))
}

fn scaled_residual(ev: &KernelEval, target: &DVector<f64>, scales: &DVector<f64>) -> f64 {
    (&ev.u - target)
        .component_div(scales)
        .iter()
        .fold(0.0, |m: f64, x| m.max(x.abs()))
}

pub fn solve_multipliers(
    target: &MomentVector,
    gas: &GasModel,
    quad: &Quadrature,
    opts: &SolverOptions,
) -> Result<MultiplierVector> {
    solve_multipliers_report(target, gas, quad, opts).map(|r| r.multipliers)
}

/// Solves for the multipliers and returns convergence diagnostics.
pub fn solve_multipliers_report(
    target: &MomentVector,
    gas: &GasModel,
    quad: &Quadrature,
    opts: &SolverOptions,
) -> Result<SolveReport> {
    let basis = &target.basis;
    basis_admits_closure(basis).map_err(Error::AdmissibilityViolation)?;
    let scales = residual_scales(target, gas)?;
    let kernel = Kernel::new(basis, quad, gas)?;
    let ustar = DVector::from_column_slice(&target.values);

    let mut lambda = match &opts.initial {
        Some(v) => MultiplierVector::new(basis.clone(), v.clone())?.as_dvector(),
        None => {
            let mac = target.macroscopic(gas)?;
            equilibrium_from_macroscopic(basis, gas, &mac)?.as_dvector()
        }
    };
    if gas.statistics == Statistics::Bose {
        lift_into_bose_domain(&kernel, &mut lambda, basis);
    }

    let dual = |ev: &KernelEval, l: &DVector<f64>| l.dot(&ustar) - ev.h_prime;
    let mut ev = kernel.eval(&lambda, true)?;
    let mut res = scaled_residual(&ev, &ustar, &scales);
    let mut regularized = 0;
    let mut condition = f64::NAN;
    let mut it = 0;
    while res > opts.tol {
        if it >= opts.max_iterations {
            return Err(Error::MaxIterations {
                iterations: it,
                residual: res,
            });
        }
        it += 1;
        let h = ev.hessian.as_ref().expect("hessian requested");
        let neg = -h;
        let sol = linalg::solve_spd(&neg, &(&ev.u - &ustar))?;
        condition = sol.condition;
        if sol.ridge > 0.0 {
            regularized += 1;
        }
        let delta = sol.x;
        let grad = &ustar - &ev.u;
        let slope = grad.dot(&delta);
        let d0 = dual(&ev, &lambda);
        // Near the solution the predicted decrease drops below the rounding
        // of the dual value; from there a step is judged by the residual.
        let in_noise = -slope <= 64.0 * f64::EPSILON * (1.0 + d0.abs());
        let mut alpha = 1.0;
        let mut accepted: Option<(DVector<f64>, KernelEval, f64)> = None;
        let mut fallback: Option<(DVector<f64>, KernelEval, f64)> = None;
        for _ in 0..opts.max_backtracks {
            let trial = &lambda + &delta * alpha;
            if let Ok(tev) = kernel.eval(&trial, true) {
                let d1 = dual(&tev, &trial);
                let tres = scaled_residual(&tev, &ustar, &scales);
                let armijo = d1 <= d0 + opts.armijo * alpha * slope;
                if d1.is_finite() && (armijo || (in_noise && tres < res)) {
                    accepted = Some((trial, tev, tres));
                    break;
                }
                if tres < res && fallback.as_ref().is_none_or(|f| tres < f.2) {
                    fallback = Some((trial, tev, tres));
                }
            }
            alpha *= 0.5;
        }
        let Some((l, e, r)) = accepted.or(fallback) else {
            let adm = admissibility_check(&MultiplierVector::new(basis.clone(), lambda.iter().copied().collect())?);
            return Err(Error::NotRealizable {
                reason: "line search stalled: no step reduces the dual objective".into(),
                iterations: it,
                residual: res,
                multiplier_norm: lambda.norm(),
                a_n: adm.a_n,
            });
        };
        lambda = l;
        ev = e;
        res = r;
        if lambda.norm() > opts.divergence_norm {
            let adm = admissibility_check(&MultiplierVector::new(basis.clone(), lambda.iter().copied().collect())?);
            return Err(Error::NotRealizable {
                reason: "multipliers diverge".into(),
                iterations: it,
                residual: res,
                multiplier_norm: lambda.norm(),
                a_n: adm.a_n,
            });
        }
    }
    if condition.is_nan() {
        let h = ev.hessian.as_ref().expect("hessian requested");
        condition = linalg::solve_spd(&(-h), &DVector::zeros(h.nrows()))?.condition;
    }
    let multipliers = MultiplierVector::new(basis.clone(), lambda.iter().copied().collect())?;
    let admissibility = admissibility_check(&multipliers);
    if !admissibility.admissible {
        return Err(Error::NotRealizable {
            reason: format!(
                "converged multipliers leave the admissible cone: {}",
                admissibility.reason.clone().unwrap_or_default()
            ),
            iterations: it,
            residual: res,
            multiplier_norm: multipliers.norm(),
            a_n: admissibility.a_n,
        });
    }
    log::debug!("dual solve converged in {it} iterations, residual {res:e}");
    Ok(SolveReport {
        multipliers,
        iterations: it,
        residual: res,
        condition,
        regularized_steps: regularized,
        admissibility,
    })
}

/// Raises the constant multiplier until `m chi / kB` clears the Bose margin
/// at every node.
fn lift_into_bose_domain(kernel: &Kernel, lambda: &mut DVector<f64>, basis: &crate::basis::MomentBasis) {
    let Some(p0) = basis.monomial(0, 0, 0) else { return };
    let chi = &kernel.table * &*lambda;
    let xmin = chi.min() * kernel.pf.beta;
    let want = 1e-2;
    if xmin < want {
        lambda[p0] += (want - xmin) / kernel.pf.beta;
    }
}
