//! Maximum-entropy closure through the convex dual.
//!
//! The closure distribution is `f = F'(chi)` with `chi = sum_A Lambda_A
//! psi_A`. The dual objective `D(Lambda) = Lambda . u* - h'(Lambda)` with
//! `h' = m int F(chi)` is convex, and its minimizer reproduces the target
//! moments `u*`.

pub mod admissibility;
pub mod flux;
pub mod junk;
pub mod partition;
pub mod solver;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::basis::{GasModel, Macroscopic, Moment, MomentBasis, MultiIndex, PhaseSpace, Quadrature};
use crate::error::{Error, Result};

pub use admissibility::{admissibility_check, nu_n, AdmissibilityReport};
pub use flux::{close_flux, ClosureOutput};
pub use junk::{realizability_probe_1d, JunkPath, ProbeStep, RealizabilityReport};
pub use partition::{partition_function, PartitionFunction, PartitionJet};
pub use solver::{solve_multipliers, solve_multipliers_report, SolveReport, SolverOptions};

/// Lagrange multipliers on a basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierVector {
    pub basis: MomentBasis,
    pub values: Vec<f64>,
}

impl MultiplierVector {
    pub fn new(basis: MomentBasis, values: Vec<f64>) -> Result<Self> {
        if values.len() != basis.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} multipliers, got {}",
                basis.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("multipliers must be finite".into()));
        }
        Ok(MultiplierVector { basis, values })
    }

    pub fn as_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.values)
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `chi(xi, I)`.
    pub fn chi(&self, xi: &[f64; 3], energy: f64, gas: &GasModel) -> f64 {
        self.basis
            .elements
            .iter()
            .zip(&self.values)
            .map(|(e, l)| l * e.eval(xi, energy, gas.m))
            .sum()
    }

    /// Closure distribution `F'(chi)`.
    pub fn distribution(&self, xi: &[f64; 3], energy: f64, gas: &GasModel) -> Result<f64> {
        let pf = partition_function(gas)?;
        Ok(pf.eval(self.chi(xi, energy, gas))?.fp)
    }
}

/// Multipliers of the classical equilibrium (Maxwellian, times
/// `exp(-I / kB T^I)` on the extended phase space) with the given fields.
///
/// Requires the basis to contain `1`, the momentum monomials and either the
/// trace `xi^2`, or all diagonal second monomials.
pub fn equilibrium_multipliers(
    basis: &MomentBasis,
    gas: &GasModel,
    rho: f64,
    v: &[f64; 3],
    theta: f64,
    theta_internal: Option<f64>,
) -> Result<MultiplierVector> {
    if !(rho > 0.0 && theta > 0.0) {
        return Err(Error::DegenerateState(format!(
            "equilibrium needs rho > 0 and theta > 0 (rho = {rho}, theta = {theta})"
        )));
    }
    let r = gas.r();
    let dim = basis.dim;
    let v2: f64 = v.iter().take(dim).map(|x| x * x).sum();
    let mut lambda = vec![0.0; basis.len()];
    // log of rho / (m Y (2 pi theta)^{dim/2} A)
    let mut log_norm = (rho / (gas.m * gas.y)).ln()
        - 0.5 * dim as f64 * (2.0 * std::f64::consts::PI * theta).ln();
    let mut quad_coef = r / (2.0 * theta);
    if basis.phase_space == PhaseSpace::ClassicalWithInternalEnergy {
        let a = gas
            .phi_exponent
            .ok_or_else(|| Error::InvalidInput("extended phase space needs a phi exponent".into()))?;
        let ti = theta_internal.unwrap_or(theta);
        if !(ti > 0.0) {
            return Err(Error::DegenerateState("internal temperature must be positive".into()));
        }
        let kappa = gas.m * ti;
        let log_a = gas.phi_scale.ln() + statrs::function::gamma::ln_gamma(a + 1.0) + (a + 1.0) * kappa.ln();
        log_norm -= log_a;
        let pos = basis
            .position(&Moment::Energy(MultiIndex::ZERO))
            .ok_or_else(|| Error::InvalidInput("extended basis lacks the energy moment".into()))?;
        let omega = r / (2.0 * ti);
        lambda[pos] = omega;
        quad_coef -= omega;
    }
    let p0 = basis
        .position(&Moment::Monomial(MultiIndex::ZERO))
        .ok_or_else(|| Error::InvalidInput("basis lacks the density moment".into()))?;
    lambda[p0] = r * (v2 / (2.0 * theta) - log_norm);
    for (i, vi) in v.iter().enumerate().take(dim) {
        let p = basis
            .position(&Moment::Monomial(MultiIndex::unit(i)))
            .ok_or_else(|| Error::InvalidInput("basis lacks momentum moments".into()))?;
        lambda[p] = -r * vi / theta;
    }
    if let Some(p) = basis.position(&Moment::Trace(MultiIndex::ZERO)) {
        lambda[p] += quad_coef;
    } else {
        for i in 0..dim {
            let u = MultiIndex::unit(i);
            let p = basis.position(&Moment::Monomial(u.add(&u))).ok_or_else(|| {
                Error::InvalidInput("basis lacks second-order moments for an equilibrium".into())
            })?;
            lambda[p] += quad_coef;
        }
    }
    MultiplierVector::new(basis.clone(), lambda)
}

/// Equilibrium multipliers from the macroscopic projection of some moments.
pub fn equilibrium_from_macroscopic(basis: &MomentBasis, gas: &GasModel, mac: &Macroscopic) -> Result<MultiplierVector> {
    equilibrium_multipliers(
        basis,
        gas,
        mac.rho,
        &[mac.v[0], mac.v[1], mac.v[2]],
        mac.theta,
        mac.theta_internal,
    )
}

/// Precomputed basis table and weights for repeated dual evaluations.
pub(crate) struct Kernel {
    pub table: DMatrix<f64>,
    /// `m * w_k`
    pub weights: DVector<f64>,
    pub pf: PartitionFunction,
}

pub(crate) struct KernelEval {
    pub u: DVector<f64>,
    pub h_prime: f64,
    pub hessian: Option<DMatrix<f64>>,
}

impl Kernel {
    pub fn new(basis: &MomentBasis, quad: &Quadrature, gas: &GasModel) -> Result<Self> {
        if quad.dim != basis.dim {
            return Err(Error::InvalidInput(format!(
                "quadrature dimension {} does not match basis dimension {}",
                quad.dim, basis.dim
            )));
        }
        if basis.phase_space == PhaseSpace::ClassicalWithInternalEnergy && quad.phi_exponent.is_none() {
            return Err(Error::InvalidInput(
                "extended basis needs a quadrature with an internal-energy grid".into(),
            ));
        }
        Ok(Kernel {
            table: basis.table(quad, gas),
            weights: DVector::from_iterator(quad.len(), quad.nodes.iter().map(|n| gas.m * n.weight)),
            pf: partition_function(gas)?,
        })
    }

    pub fn eval(&self, lambda: &DVector<f64>, want_hessian: bool) -> Result<KernelEval> {
        let chi = &self.table * lambda;
        let n = chi.len();
        let mut wfp = DVector::zeros(n);
        let mut wfpp = DVector::zeros(n);
        let mut h_prime = 0.0;
        for k in 0..n {
            let j = self.pf.eval(chi[k])?;
            if !(j.fp.is_finite() && j.fpp.is_finite() && j.f.is_finite()) {
                return Err(Error::NonFiniteIntegrand { node: k });
            }
            let w = self.weights[k];
            wfp[k] = w * j.fp;
            wfpp[k] = w * j.fpp;
            h_prime += w * j.f;
        }
        let u = self.table.tr_mul(&wfp);
        let hessian = if want_hessian {
            let mut scaled = self.table.clone();
            for (k, mut row) in scaled.row_iter_mut().enumerate() {
                row *= wfpp[k];
            }
            let h = self.table.tr_mul(&scaled);
            Some((&h + h.transpose()) * 0.5)
        } else {
            None
        };
        Ok(KernelEval { u, h_prime, hessian })
    }
}
