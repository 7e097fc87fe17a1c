//! Near-equilibrium closure `f = f_E (1 - (m/kB) chi~)`.
//!
//! `chi~ = Lambda~_A psi_A` solves the Gram system
//! `G Lambda~ = (u_E - u) kB / m` with `G_AB = m int f_E psi_A psi_B`, so the
//! closure reproduces the prescribed moments exactly.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::gaussian::maxwellian;
use super::Distribution;
use crate::basis::{compute_moments, GasModel, MomentBasis, MomentVector, PhaseSpace, Quadrature};
use crate::error::{Error, Result};

/// Relative departure from equilibrium above which the result is flagged.
pub const DEPARTURE_FLAG: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumState {
    pub rho: f64,
    pub v: [f64; 3],
    pub t: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LinearizedClosure {
    pub basis: MomentBasis,
    pub equilibrium: EquilibriumState,
    /// Coefficients of `chi~` on the basis.
    pub chi_tilde: Vec<f64>,
    /// Largest scaled departure `|u_A - u_E,A| / (rho (sqrt(theta)+|v|)^deg)`.
    pub departure: f64,
    /// Set when `departure` exceeds [`DEPARTURE_FLAG`].
    pub far_from_equilibrium: bool,
    /// Set when `1 - (m/kB) chi~ < 0` at some node of the check grid.
    pub negative_somewhere: bool,
    /// Closed fluxes `m int f xi_i psi_A`, one vector per velocity component.
    pub fluxes: Vec<Vec<f64>>,
    #[serde(skip)]
    fe: Option<super::gaussian::GaussianClosure>,
    beta: f64,
    m: f64,
}

impl LinearizedClosure {
    pub fn chi(&self, xi: &[f64; 3], energy: f64) -> f64 {
        self.basis
            .elements
            .iter()
            .zip(&self.chi_tilde)
            .map(|(e, c)| c * e.eval(xi, energy, self.m))
            .sum()
    }

    /// Closed flux `m int f xi_i psi(xi)` for an arbitrary weight, integrated
    /// exactly on a Hermite grid of sufficient order.
    pub fn flux_of<F: Fn(&[f64; 3]) -> f64>(&self, weight_degree: u32, psi: F, gas: &GasModel) -> Result<f64> {
        let order = ((self.basis.velocity_degree() + weight_degree) / 2 + 2) as usize;
        let q = grid(&self.equilibrium, gas, order)?;
        let mut s = 0.0;
        for n in &q.nodes {
            s += gas.m * n.weight * self.value(&n.xi, n.energy) * psi(&n.xi);
        }
        Ok(s)
    }
}

impl Distribution for LinearizedClosure {
    fn value(&self, xi: &[f64; 3], energy: f64) -> f64 {
        let fe = self.fe.as_ref().map_or(0.0, |g| g.value(xi, energy));
        fe * (1.0 - self.beta * self.chi(xi, energy))
    }
}

fn grid(eq: &EquilibriumState, gas: &GasModel, order: usize) -> Result<Quadrature> {
    let s = (gas.r() * eq.t).sqrt();
    Quadrature::new(3, order, eq.v, [[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, s]], None, gas)
}

pub fn linearized_closure(
    eq: EquilibriumState,
    target: &MomentVector,
    gas: &GasModel,
) -> Result<LinearizedClosure> {
    let basis = &target.basis;
    if basis.phase_space != PhaseSpace::Classical || basis.dim != 3 {
        return Err(Error::InvalidInput("linearized closure runs on classical 3D bases".into()));
    }
    let fe = maxwellian(eq.rho, eq.v, eq.t, gas)?;
    let top = basis.velocity_degree();
    // Exact for Gaussian-weighted polynomials of degree 2 top + 1.
    let q = grid(&eq, gas, (top + 2) as usize)?;
    let table = basis.table(&q, gas);
    let w = DVector::from_iterator(q.len(), q.nodes.iter().map(|n| gas.m * n.weight * fe.value(&n.xi, 0.0)));
    let mut scaled = table.clone();
    for (k, mut row) in scaled.row_iter_mut().enumerate() {
        row *= w[k];
    }
    let gram: DMatrix<f64> = table.tr_mul(&scaled);
    let ue = table.tr_mul(&w);
    let u = DVector::from_column_slice(&target.values);
    let beta = gas.m / gas.kb;
    let chol = gram.clone().cholesky().ok_or_else(|| {
        Error::SingularLinearSystem("Gram matrix of the equilibrium is singular on this basis".into())
    })?;
    let rhs = (&ue - &u) / beta;
    let lt = chol.solve(&rhs);
    if lt.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularLinearSystem("non-finite Gram solution".into()));
    }
    let theta = gas.r() * eq.t;
    let c = theta.sqrt() + eq.v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let departure = basis
        .elements
        .iter()
        .enumerate()
        .map(|(k, e)| (u[k] - ue[k]).abs() / (eq.rho * c.powi(e.velocity_degree() as i32)))
        .fold(0.0, f64::max);
    let mut lc = LinearizedClosure {
        basis: basis.clone(),
        equilibrium: eq,
        chi_tilde: lt.iter().copied().collect(),
        departure,
        far_from_equilibrium: departure > DEPARTURE_FLAG,
        negative_somewhere: false,
        fluxes: Vec::new(),
        fe: Some(fe),
        beta,
        m: gas.m,
    };
    let check = grid(&eq, gas, 12)?;
    lc.negative_somewhere = check
        .nodes
        .iter()
        .any(|n| 1.0 - beta * lc.chi(&n.xi, 0.0) < 0.0);
    // Fluxes: int f xi_i psi_A is a Gaussian-weighted polynomial of degree
    // <= 2 top + 1, integrated exactly on `q`.
    let mut fluxes = vec![vec![0.0; basis.len()]; 3];
    for (k, n) in q.nodes.iter().enumerate() {
        let fv = gas.m * n.weight * lc.value(&n.xi, 0.0);
        for (i, fl) in fluxes.iter_mut().enumerate() {
            for (a, x) in fl.iter_mut().enumerate() {
                *x += fv * n.xi[i] * table[(k, a)];
            }
        }
    }
    lc.fluxes = fluxes;
    if log::log_enabled!(log::Level::Debug) {
        let back = compute_moments(|x, e| lc.value(x, e), basis, &q, gas)?;
        let err = back
            .values
            .iter()
            .zip(&target.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        log::debug!("linearized closure moment mismatch {err:e}");
    }
    Ok(lc)
}
