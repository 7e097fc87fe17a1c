//! Hyperbolicity region of the linearized 13-moment closure.
//!
//! Grid axes are the normalized shear `sigma/p` (state `sigma = diag(s, -s/2,
//! -s/2) p`) and heat flux `q/(p c0)` along `x`, at `rho = 1, v = 0, theta = 1`.
//! A point is hyperbolic when the closure's temporal matrix `m int f psi psi`
//! is positive definite and the flux Jacobian has a real spectrum in every
//! sampled direction.
//!
//! Off-axis directions matter: with the icosahedral set, any shear makes some
//! oblique spectrum complex at first order in `sigma/p`, so the region
//! shrinks to the `sigma = 0` segment. [`DirectionSet::Axis`] restricts the
//! test to waves along `x`, the one-dimensional setting.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{GasModel, MomentBasis, MomentVector, MultiIndex, Quadrature};
use crate::closures::{linearized_closure, Distribution, EquilibriumState};
use crate::error::{Error, Result};
use crate::numerics::{linalg, sphere};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionSet {
    /// 12 icosahedron vertices plus the x axis.
    #[default]
    Icosahedral,
    /// The x axis only.
    Axis,
}

impl DirectionSet {
    pub fn directions(self) -> Vec<[f64; 3]> {
        match self {
            DirectionSet::Icosahedral => scan_directions(),
            DirectionSet::Axis => vec![[1.0, 0.0, 0.0]],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RegionConfig {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub sigma_points: usize,
    pub q_min: f64,
    pub q_max: f64,
    pub q_points: usize,
    /// Relative imaginary part below which an eigenvalue counts as real.
    pub imag_tol: f64,
    pub directions: DirectionSet,
}

impl Default for RegionConfig {
    fn default() -> Self {
        RegionConfig {
            sigma_min: -1.5,
            sigma_max: 1.5,
            sigma_points: 101,
            q_min: -1.5,
            q_max: 1.5,
            q_points: 101,
            imag_tol: 1e-6,
            directions: DirectionSet::Icosahedral,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionScan {
    pub config: RegionConfig,
    pub sigma: Vec<f64>,
    pub q: Vec<f64>,
    /// Row-major over (sigma index, q index).
    pub hyperbolic: Vec<bool>,
    pub directions: Vec<[f64; 3]>,
}

impl RegionScan {
    pub fn at(&self, i_sigma: usize, i_q: usize) -> bool {
        self.hyperbolic[i_sigma * self.q.len() + i_q]
    }

    /// CSV with columns `sigma_over_p,q_norm,hyperbolic`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("sigma_over_p,q_norm,hyperbolic\n");
        for (i, sg) in self.sigma.iter().enumerate() {
            for (j, q) in self.q.iter().enumerate() {
                s.push_str(&format!(
                    "{},{},{}\n",
                    crate::cli::fmt_num(*sg),
                    crate::cli::fmt_num(*q),
                    u8::from(self.at(i, j))
                ));
            }
        }
        s
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

/// The 12 icosahedron vertices plus the x axis.
pub fn scan_directions() -> Vec<[f64; 3]> {
    let mut d: Vec<[f64; 3]> = sphere::icosahedron_vertices().iter().map(|v| [v[0], v[1], v[2]]).collect();
    d.push([1.0, 0.0, 0.0]);
    d
}

/// Thirteen moments of the normalized state.
pub fn state_13(sigma_over_p: f64, q_norm: f64) -> MomentVector {
    let basis = MomentBasis::grad13();
    let (rho, theta) = (1.0, 1.0);
    let p = rho * theta;
    let c0 = (5.0 * theta / 3.0f64).sqrt();
    let sig = [sigma_over_p * p, -0.5 * sigma_over_p * p, -0.5 * sigma_over_p * p];
    let mut values = vec![0.0; basis.len()];
    values[basis.monomial(0, 0, 0).expect("density")] = rho;
    for (i, s) in sig.iter().enumerate() {
        let u = MultiIndex::unit(i);
        let pos = basis.position(&crate::basis::Moment::Monomial(u.add(&u))).expect("diagonal");
        values[pos] = p + s;
    }
    let pos = basis
        .position(&crate::basis::Moment::Trace(MultiIndex::unit(0)))
        .expect("heat flux");
    // F_ll1 = 2 q_1
    values[pos] = 2.0 * q_norm * p * c0;
    MomentVector { basis, values }
}

/// Closed 13-moment fluxes of a state, with the equilibrium projected from it.
fn fluxes_13(u: &MomentVector, gas: &GasModel) -> Result<Vec<Vec<f64>>> {
    let mac = u.macroscopic(gas)?;
    let eq = EquilibriumState {
        rho: mac.rho,
        v: [mac.v[0], mac.v[1], mac.v[2]],
        t: mac.theta / gas.r(),
    };
    Ok(linearized_closure(eq, u, gas)?.fluxes)
}

/// Temporal matrix `m int f psi psi` of the linearized closure at `u`.
fn temporal_matrix(u: &MomentVector, gas: &GasModel) -> Result<DMatrix<f64>> {
    let mac = u.macroscopic(gas)?;
    let eq = EquilibriumState {
        rho: mac.rho,
        v: [mac.v[0], mac.v[1], mac.v[2]],
        t: mac.theta / gas.r(),
    };
    let lc = linearized_closure(eq, u, gas)?;
    let s = mac.theta.sqrt();
    let order = (3 * u.basis.velocity_degree() / 2 + 2) as usize;
    let q = Quadrature::new(3, order, eq.v, [[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, s]], None, gas)?;
    let table = u.basis.table(&q, gas);
    let w = DVector::from_iterator(q.len(), q.nodes.iter().map(|n| gas.m * n.weight * lc.value(&n.xi, 0.0)));
    let mut scaled = table.clone();
    for (k, mut row) in scaled.row_iter_mut().enumerate() {
        row *= w[k];
    }
    Ok(table.tr_mul(&scaled))
}

/// Flux Jacobians `dF_i/du` by central differences.
pub fn flux_jacobians_13(u: &MomentVector, gas: &GasModel) -> Result<Vec<DMatrix<f64>>> {
    let n = u.basis.len();
    let mac = u.macroscopic(gas)?;
    let c = mac.theta.sqrt() + mac.v.norm();
    let mut jac = vec![DMatrix::zeros(n, n); 3];
    for b in 0..n {
        let h = 1e-5 * mac.rho * c.powi(u.basis.elements[b].velocity_degree() as i32);
        let mut up = u.clone();
        let mut dn = u.clone();
        up.values[b] += h;
        dn.values[b] -= h;
        let fp = fluxes_13(&up, gas)?;
        let fm = fluxes_13(&dn, gas)?;
        for i in 0..3 {
            for a in 0..n {
                jac[i][(a, b)] = (fp[i][a] - fm[i][a]) / (2.0 * h);
            }
        }
    }
    Ok(jac)
}

/// Hyperbolicity test at one normalized point.
pub fn point_is_hyperbolic(
    sigma_over_p: f64,
    q_norm: f64,
    gas: &GasModel,
    imag_tol: f64,
    directions: &[[f64; 3]],
) -> Result<bool> {
    let u = state_13(sigma_over_p, q_norm);
    let a0 = temporal_matrix(&u, gas)?;
    if a0.cholesky().is_none() {
        return Ok(false);
    }
    let jac = flux_jacobians_13(&u, gas)?;
    for d in directions {
        let jn = &jac[0] * d[0] + &jac[1] * d[1] + &jac[2] * d[2];
        let ev = linalg::general_eigenvalues(&jn)?;
        let scale = ev.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
        if ev.iter().any(|z| z.im.abs() > imag_tol * scale) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn hyperbolicity_region_scan(config: &RegionConfig, gas: &GasModel) -> Result<RegionScan> {
    if config.sigma_points == 0 || config.q_points == 0 {
        return Err(Error::InvalidInput("grid needs at least one point per axis".into()));
    }
    if ![config.sigma_min, config.sigma_max, config.q_min, config.q_max]
        .iter()
        .all(|x| x.is_finite())
    {
        return Err(Error::InvalidInput("grid bounds must be finite".into()));
    }
    let sigma = linspace(config.sigma_min, config.sigma_max, config.sigma_points);
    let q = linspace(config.q_min, config.q_max, config.q_points);
    let dirs = config.directions.directions();
    let points: Vec<(f64, f64)> = sigma.iter().flat_map(|s| q.iter().map(move |x| (*s, *x))).collect();
    let hyperbolic: Vec<bool> = points
        .par_iter()
        .map(|(s, x)| point_is_hyperbolic(*s, *x, gas, config.imag_tol, &dirs).unwrap_or(false))
        .collect();
    Ok(RegionScan {
        config: config.clone(),
        sigma,
        q,
        hyperbolic,
        directions: dirs,
    })
}
