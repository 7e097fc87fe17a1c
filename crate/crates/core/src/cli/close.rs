//! `close`: moments to multipliers and closing fluxes, and back.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::basis::{
    adapt_quadrature, compute_moments, GasModel, Moment, MomentBasis, MomentVector, PhaseSpace, Quadrature,
};
use crate::error::{Error, Result};
use crate::mep::{
    close_flux, solve_multipliers_report, AdmissibilityReport, MultiplierVector, SolverOptions,
};

/// A basis by name (`full:N`, `full_internal:N`, `euler`, `grad13`,
/// `six_moment`, `line:N`) or as an explicit element list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisSpec {
    Named(String),
    Explicit(MomentBasis),
}

impl BasisSpec {
    pub fn resolve(&self) -> Result<MomentBasis> {
        let name = match self {
            BasisSpec::Explicit(b) => return Ok(b.clone()),
            BasisSpec::Named(s) => s.trim(),
        };
        let order = |s: &str| -> Result<u32> {
            s.parse()
                .map_err(|_| Error::InvalidInput(format!("bad basis order in '{name}'")))
        };
        Ok(match name.split_once(':') {
            Some(("full", n)) => MomentBasis::full(order(n)?, PhaseSpace::Classical),
            Some(("full_internal", n)) => MomentBasis::full(order(n)?, PhaseSpace::ClassicalWithInternalEnergy),
            Some(("line", n)) => MomentBasis::line(order(n)?),
            None if name == "euler" => MomentBasis::euler(),
            None if name == "grad13" => MomentBasis::grad13(),
            None if name == "six_moment" => MomentBasis::six_moment(),
            _ => return Err(Error::InvalidInput(format!("unknown basis '{name}'"))),
        })
    }
}

#[derive(Debug, Deserialize)]
struct MomentsInput {
    basis: BasisSpec,
    values: Vec<f64>,
    #[serde(default)]
    gas: GasModel,
    quadrature_order: Option<usize>,
    #[serde(default)]
    solver: SolverOptions,
}

#[derive(Debug, Deserialize)]
struct MultipliersInput {
    basis: BasisSpec,
    multipliers: Vec<f64>,
    #[serde(default)]
    gas: GasModel,
    quadrature_order: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct CloseOutput {
    pub basis: BasisSpec,
    pub labels: Vec<String>,
    pub gas: GasModel,
    pub quadrature_order: usize,
    pub multipliers: Vec<f64>,
    pub moments: Vec<f64>,
    /// `F_{iA}`, one vector per velocity component.
    pub fluxes: Vec<Vec<f64>>,
    pub entropy: f64,
    pub admissibility: AdmissibilityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

/// Quadrature order used when the input does not set one.
pub fn default_order(basis: &MomentBasis) -> usize {
    if basis.dim == 1 {
        40
    } else {
        2 * basis.velocity_degree() as usize + 6
    }
}

pub fn from_moments(text: &str) -> Result<CloseOutput> {
    let inp: MomentsInput = serde_json::from_str(text)?;
    let basis = inp.basis.resolve()?;
    inp.gas.validate()?;
    let target = MomentVector::new(basis.clone(), inp.values)?;
    let order = inp.quadrature_order.unwrap_or_else(|| default_order(&basis));
    let quad = adapt_quadrature(&target, order, &inp.gas)?;
    let rep = solve_multipliers_report(&target, &inp.gas, &quad, &inp.solver)?;
    let out = close_flux(&rep.multipliers, &inp.gas, &quad)?;
    Ok(CloseOutput {
        basis: inp.basis,
        labels: basis.labels(),
        gas: inp.gas,
        quadrature_order: order,
        multipliers: rep.multipliers.values,
        moments: out.moments,
        fluxes: out.fluxes,
        entropy: out.entropy,
        admissibility: rep.admissibility,
        iterations: Some(rep.iterations),
        residual: Some(rep.residual),
    })
}

/// Grid for given multipliers: the Gaussian envelope of the quadratic part
/// of `chi` gives a first grid, the moments computed on it a second one.
fn envelope_quadrature(lambda: &MultiplierVector, gas: &GasModel, order: usize) -> Result<Quadrature> {
    let basis = &lambda.basis;
    let mut a = Matrix3::<f64>::zeros();
    let mut b = Vector3::<f64>::zeros();
    let mut energy = 0.0;
    for (e, l) in basis.elements.iter().zip(&lambda.values) {
        match e {
            Moment::Monomial(m) if m.order() == 1 => b[m.powers().iter().position(|x| *x == 1).unwrap()] += l,
            Moment::Monomial(m) if m.order() == 2 => {
                let p = m.powers();
                let idx: Vec<usize> = (0..3).flat_map(|k| std::iter::repeat_n(k, p[k] as usize)).collect();
                a[(idx[0], idx[1])] += 0.5 * l;
                a[(idx[1], idx[0])] += 0.5 * l;
            }
            Moment::Trace(m) if m.order() == 0 => a += Matrix3::identity() * *l,
            Moment::Energy(m) if m.order() == 0 => {
                a += Matrix3::identity() * *l;
                energy += l;
            }
            _ => {}
        }
    }
    let beta = gas.m / gas.kb;
    let dim = basis.dim;
    let mut scale = [[0.0; 3]; 3];
    let mut center = [0.0; 3];
    let sub = a.view((0, 0), (dim, dim)).into_owned();
    match sub.clone().cholesky() {
        Some(_) => {
            let inv = sub
                .try_inverse()
                .ok_or_else(|| Error::DegenerateState("quadratic multiplier block is singular".into()))?;
            let cov = &inv / (2.0 * beta);
            let l = cov
                .cholesky()
                .ok_or_else(|| Error::DegenerateState("envelope covariance is not positive definite".into()))?
                .l();
            let mean = -0.5 * &inv * b.rows(0, dim);
            for i in 0..dim {
                center[i] = mean[i];
                for j in 0..=i {
                    scale[i][j] = l[(i, j)];
                }
            }
        }
        None => {
            // No Gaussian envelope (higher-order terms confine f): unit grid.
            for (i, row) in scale.iter_mut().enumerate().take(dim) {
                row[i] = (gas.kb / gas.m).sqrt();
            }
        }
    }
    let internal = match basis.phase_space {
        PhaseSpace::Classical => None,
        PhaseSpace::ClassicalWithInternalEnergy => {
            if !(energy > 0.0) {
                return Err(Error::DegenerateState("energy multiplier must be positive".into()));
            }
            Some((order, gas.kb / (2.0 * energy * gas.m)))
        }
    };
    Quadrature::new(dim, order, center, scale, internal, gas)
}

pub fn from_multipliers(text: &str) -> Result<CloseOutput> {
    let inp: MultipliersInput = serde_json::from_str(text)?;
    let basis = inp.basis.resolve()?;
    inp.gas.validate()?;
    let lambda = MultiplierVector::new(basis.clone(), inp.multipliers)?;
    let order = inp.quadrature_order.unwrap_or_else(|| default_order(&basis));
    let first = envelope_quadrature(&lambda, &inp.gas, order)?;
    let f = |xi: &[f64; 3], e: f64| lambda.distribution(xi, e, &inp.gas).unwrap_or(f64::NAN);
    let hint = compute_moments(f, &basis, &first, &inp.gas)?;
    let quad = adapt_quadrature(&hint, order, &inp.gas)?;
    let out = close_flux(&lambda, &inp.gas, &quad)?;
    let admissibility = crate::mep::admissibility_check(&lambda);
    Ok(CloseOutput {
        basis: inp.basis,
        labels: basis.labels(),
        gas: inp.gas,
        quadrature_order: order,
        multipliers: lambda.values,
        moments: out.moments,
        fluxes: out.fluxes,
        entropy: out.entropy,
        admissibility,
        iterations: None,
        residual: None,
    })
}
