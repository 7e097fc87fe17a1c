//! Maxwellian and the ten-moment Gaussian closure.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::Distribution;
use crate::basis::GasModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub rho: f64,
    pub v: [f64; 3],
    /// Pressure tensor.
    pub p: [[f64; 3]; 3],
}

impl GaussianParams {
    pub fn isotropic(rho: f64, v: [f64; 3], pressure: f64) -> Self {
        let mut p = [[0.0; 3]; 3];
        for (i, row) in p.iter_mut().enumerate() {
            row[i] = pressure;
        }
        GaussianParams { rho, v, p }
    }

    pub fn pressure(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.p[i][j])
    }

    pub fn velocity(&self) -> Vector3<f64> {
        Vector3::from_column_slice(&self.v)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::DegenerateState(format!("density must be positive, got {}", self.rho)));
        }
        let p = self.pressure();
        let asym = (p - p.transpose()).abs().max();
        if asym > 1e-12 * p.abs().max().max(1e-300) {
            return Err(Error::NotPositiveDefinite("pressure tensor is not symmetric".into()));
        }
        if p.cholesky().is_none() {
            return Err(Error::NotPositiveDefinite("pressure tensor".into()));
        }
        Ok(())
    }
}

/// `f = rho / (m (2 pi)^{3/2} det(P/rho)^{1/2}) exp(-1/2 (P/rho)^{-1}_{ij} C_i C_j)`.
#[derive(Debug, Clone)]
pub struct GaussianClosure {
    pub params: GaussianParams,
    inv: Matrix3<f64>,
    norm: f64,
}

impl GaussianClosure {
    pub fn new(params: GaussianParams, gas: &GasModel) -> Result<Self> {
        params.validate()?;
        let theta = params.pressure() / params.rho;
        let det = theta.determinant();
        let inv = theta
            .try_inverse()
            .ok_or_else(|| Error::NotPositiveDefinite("pressure tensor is singular".into()))?;
        let norm = params.rho / (gas.m * (2.0 * std::f64::consts::PI).powf(1.5) * det.sqrt());
        Ok(GaussianClosure { params, inv, norm })
    }

    /// Closing flux `F_ijk = rho v_i v_j v_k + v_i p_jk + v_j p_ik + v_k p_ij`.
    pub fn closing_flux(&self) -> [[[f64; 3]; 3]; 3] {
        gaussian_flux_10(&self.params)
    }
}

impl Distribution for GaussianClosure {
    fn value(&self, xi: &[f64; 3], _energy: f64) -> f64 {
        let c = Vector3::new(xi[0] - self.params.v[0], xi[1] - self.params.v[1], xi[2] - self.params.v[2]);
        self.norm * (-0.5 * c.dot(&(self.inv * c))).exp()
    }
}

pub fn maxwellian(rho: f64, v: [f64; 3], t: f64, gas: &GasModel) -> Result<GaussianClosure> {
    if !(rho > 0.0 && t > 0.0) {
        return Err(Error::DegenerateState(format!(
            "Maxwellian needs rho > 0 and T > 0 (rho = {rho}, T = {t})"
        )));
    }
    let theta = gas.r() * t;
    GaussianClosure::new(GaussianParams::isotropic(rho, v, rho * theta), gas)
}

pub fn gaussian_closure_10(params: GaussianParams, gas: &GasModel) -> Result<(GaussianClosure, [[[f64; 3]; 3]; 3])> {
    let g = GaussianClosure::new(params, gas)?;
    let flux = g.closing_flux();
    Ok((g, flux))
}

pub fn gaussian_flux_10(params: &GaussianParams) -> [[[f64; 3]; 3]; 3] {
    let (r, v, p) = (params.rho, params.v, params.p);
    let mut f = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                f[i][j][k] = r * v[i] * v[j] * v[k] + v[i] * p[j][k] + v[j] * p[i][k] + v[k] * p[i][j];
            }
        }
    }
    f
}
