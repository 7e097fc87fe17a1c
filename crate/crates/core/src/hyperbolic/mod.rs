//! Symmetric hyperbolic form in the main field and characteristic speeds.
//!
//! With `h'` and `h'^i` as potentials, the closed system reads
//! `A0 dLambda/dt + A^i dLambda/dx_i = ...` with `A0 = -m int F'' psi psi`
//! and `A^i = -m int F'' xi_i psi psi` (signs flipped so `A0` is positive
//! definite).

pub mod region;

use nalgebra::{DMatrix, Vector3};
use serde::Serialize;

use crate::basis::{GasModel, MomentBasis, MomentVector, Quadrature};
use crate::error::{Error, Result};
use crate::mep::{close_flux, MultiplierVector};
use crate::numerics::linalg;

pub use region::{hyperbolicity_region_scan, DirectionSet, RegionConfig, RegionScan};

#[derive(Debug, Clone, Serialize)]
pub struct HyperbolicSystem {
    pub basis: MomentBasis,
    pub a0: DMatrix<f64>,
    pub ai: Vec<DMatrix<f64>>,
    /// Largest relative asymmetry found before symmetrization.
    pub asymmetry: f64,
    pub rho: f64,
    pub v: [f64; 3],
    /// Kinetic temperature proxy `p / rho` of the state.
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpeedSpectrum {
    pub direction: [f64; 3],
    pub eigenvalues: Vec<f64>,
    pub lambda_max: f64,
    /// Monatomic equilibrium sound speed `sqrt(5 p / (3 rho))`.
    pub c0: f64,
    /// `v . n`
    pub bulk_speed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBound {
    pub n: u32,
    pub bound: f64,
    /// `(lambda_max - v.n) / c0`
    pub ratio: f64,
    pub satisfied: bool,
    pub margin: f64,
}

pub fn assemble_system(lambda: &MultiplierVector, gas: &GasModel, quad: &Quadrature) -> Result<HyperbolicSystem> {
    let out = close_flux(lambda, gas, quad)?;
    let mv = MomentVector::new(lambda.basis.clone(), out.moments.clone())?;
    let mac = mv.macroscopic(gas)?;
    let (a0, r0) = linalg::symmetrize(&(-&out.hessian));
    let mut asym = r0;
    let mut ai = Vec::with_capacity(out.flux_hessians.len());
    for h in &out.flux_hessians {
        let (a, r) = linalg::symmetrize(&(-h));
        asym = asym.max(r);
        ai.push(a);
    }
    Ok(HyperbolicSystem {
        basis: lambda.basis.clone(),
        a0,
        ai,
        asymmetry: asym,
        rho: mac.rho,
        v: [mac.v[0], mac.v[1], mac.v[2]],
        theta: mac.theta,
    })
}

impl HyperbolicSystem {
    pub fn c0(&self) -> f64 {
        (5.0 * self.theta / 3.0).sqrt()
    }

    /// `sum_i n_i A^i`
    pub fn directional(&self, n: &[f64; 3]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.a0.nrows(), self.a0.ncols());
        for (i, a) in self.ai.iter().enumerate() {
            m += a * n[i];
        }
        m
    }
}

/// Solves `(A^i n_i) x = lambda A0 x` by congruence with the Cholesky factor of `A0`.
pub fn characteristic_speeds(sys: &HyperbolicSystem, n: &[f64; 3]) -> Result<SpeedSpectrum> {
    let nv = Vector3::from_column_slice(n);
    let norm = nv.norm();
    if !(norm > 0.0) {
        return Err(Error::InvalidInput("direction must be nonzero".into()));
    }
    let dir = nv / norm;
    let mut d = [dir[0], dir[1], dir[2]];
    if sys.ai.len() == 1 {
        d = [dir[0].signum(), 0.0, 0.0];
    }
    let ev = linalg::pencil_eigenvalues(&sys.directional(&d), &sys.a0)?;
    let lambda_max = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(SpeedSpectrum {
        direction: d,
        eigenvalues: ev,
        lambda_max,
        c0: sys.c0(),
        bulk_speed: sys.v[0] * d[0] + sys.v[1] * d[1] + sys.v[2] * d[2],
    })
}

/// `sqrt((6/5)(N - 1/2))`.
pub fn speed_bound(n: u32) -> f64 {
    (1.2 * (n as f64 - 0.5)).sqrt()
}

pub fn check_lower_bound(n: u32, spectrum: &SpeedSpectrum) -> LowerBound {
    let bound = speed_bound(n);
    let ratio = (spectrum.lambda_max - spectrum.bulk_speed) / spectrum.c0;
    LowerBound {
        n,
        bound,
        ratio,
        satisfied: ratio >= bound - 1e-9,
        margin: ratio - bound,
    }
}

/// Equilibrium system and spectrum for the full basis of order `n` (the
/// Euler basis for `n = 1`), at `rho = 1, v = 0, theta = 1`.
pub fn equilibrium_spectrum(n: u32, gas: &GasModel) -> Result<(HyperbolicSystem, SpeedSpectrum)> {
    let basis = if n == 1 {
        MomentBasis::euler()
    } else {
        MomentBasis::full(n, crate::basis::PhaseSpace::Classical)
    };
    let theta = 1.0;
    let lambda = crate::mep::equilibrium_multipliers(&basis, gas, 1.0, &[0.0; 3], theta, None)?;
    let s = theta.sqrt();
    let quad = Quadrature::new(
        3,
        (n + 3) as usize,
        [0.0; 3],
        [[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, s]],
        None,
        gas,
    )?;
    let sys = assemble_system(&lambda, gas, &quad)?;
    let spec = characteristic_speeds(&sys, &[1.0, 0.0, 0.0])?;
    Ok((sys, spec))
}

/// Central-difference Jacobian of a flux map, with step `steps[b]` on
/// component `b`.
pub fn fd_jacobian<F>(flux: F, u: &[f64], steps: &[f64]) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = u.len();
    if steps.len() != n {
        return Err(Error::InvalidInput("one difference step per component is required".into()));
    }
    let mut jac = DMatrix::zeros(n, n);
    let mut w = u.to_vec();
    for b in 0..n {
        let h = steps[b];
        w[b] = u[b] + h;
        let fp = flux(&w)?;
        w[b] = u[b] - h;
        let fm = flux(&w)?;
        w[b] = u[b];
        if fp.len() != n || fm.len() != n {
            return Err(Error::InvalidInput("flux map must be square".into()));
        }
        for a in 0..n {
            jac[(a, b)] = (fp[a] - fm[a]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Largest eigenvalue modulus of a (not necessarily symmetric) Jacobian.
pub fn spectral_radius(jac: &DMatrix<f64>) -> Result<f64> {
    Ok(linalg::general_eigenvalues(jac)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}
