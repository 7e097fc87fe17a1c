//! Closed fluxes, entropy and potentials for given multipliers.

use nalgebra::DMatrix;
use serde::Serialize;

use super::admissibility::admissibility_check;
use super::{partition_function, MultiplierVector};
use crate::basis::{GasModel, Quadrature};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct ClosureOutput {
    /// Moments `F_A = m int F' psi_A`.
    pub moments: Vec<f64>,
    /// `F_{iA} = m int F' xi_i psi_A`, one vector per velocity component.
    pub fluxes: Vec<Vec<f64>>,
    /// Entropy density `h`, computed from `f` alone.
    pub entropy: f64,
    pub entropy_flux: Vec<f64>,
    /// `h' = m int F`
    pub potential: f64,
    /// `h'^i = m int F xi_i`
    pub potential_flux: Vec<f64>,
    /// `m int F'' psi_A psi_B` (negative definite).
    pub hessian: DMatrix<f64>,
    /// `m int F'' xi_i psi_A psi_B`.
    pub flux_hessians: Vec<DMatrix<f64>>,
}

pub fn close_flux(lambda: &MultiplierVector, gas: &GasModel, quad: &Quadrature) -> Result<ClosureOutput> {
    let adm = admissibility_check(lambda);
    if !adm.admissible {
        return Err(Error::AdmissibilityViolation(adm.reason.unwrap_or_default()));
    }
    close_flux_unchecked(lambda, gas, quad)
}

/// As [`close_flux`] but without the admissibility precondition (the result
/// is then a property of the quadrature only).
pub fn close_flux_unchecked(lambda: &MultiplierVector, gas: &GasModel, quad: &Quadrature) -> Result<ClosureOutput> {
    let basis = &lambda.basis;
    let pf = partition_function(gas)?;
    let n = basis.len();
    let dim = basis.dim;
    let mut moments = vec![0.0; n];
    let mut fluxes = vec![vec![0.0; n]; dim];
    let mut entropy = 0.0;
    let mut entropy_flux = vec![0.0; dim];
    let mut potential = 0.0;
    let mut potential_flux = vec![0.0; dim];
    let mut hessian = DMatrix::zeros(n, n);
    let mut flux_hessians = vec![DMatrix::zeros(n, n); dim];
    let mut psi = vec![0.0; n];
    for (k, node) in quad.nodes.iter().enumerate() {
        basis.eval_into(&node.xi, node.energy, gas.m, &mut psi);
        let chi: f64 = psi.iter().zip(&lambda.values).map(|(a, b)| a * b).sum();
        let j = pf.eval(chi)?;
        if !(j.f.is_finite() && j.fp.is_finite() && j.fpp.is_finite()) {
            return Err(Error::NonFiniteIntegrand { node: k });
        }
        let w = gas.m * node.weight;
        let h = pf.entropy_of(j.fp);
        entropy += w * h;
        potential += w * j.f;
        for a in 0..n {
            moments[a] += w * j.fp * psi[a];
        }
        for i in 0..dim {
            let x = node.xi[i];
            entropy_flux[i] += w * h * x;
            potential_flux[i] += w * j.f * x;
            for a in 0..n {
                fluxes[i][a] += w * j.fp * x * psi[a];
            }
        }
        for a in 0..n {
            let wa = w * j.fpp * psi[a];
            for b in 0..n {
                let v = wa * psi[b];
                hessian[(a, b)] += v;
                for i in 0..dim {
                    flux_hessians[i][(a, b)] += v * node.xi[i];
                }
            }
        }
    }
    Ok(ClosureOutput {
        moments,
        fluxes,
        entropy,
        entropy_flux,
        potential,
        potential_flux,
        hessian,
        flux_hessians,
    })
}
