//! x-fluxes, equilibrium projections and realizability for the three moment
//! systems the simulator evolves.
//!
//! Fluxes of the Gaussian and linearized 13-moment closures are built from
//! the central moments of the closed distribution up to order four, shifted
//! to raw moments by the binomial expansion of `(v + C)^alpha`.

use nalgebra::{DMatrix, Matrix3};
use serde::{Deserialize, Serialize};

use crate::basis::{GasModel, Moment, MomentBasis, MultiIndex, Quadrature};
use crate::closures::{GaussianClosure, GaussianParams};
use crate::error::{Error, Result};
use crate::hyperbolic::{fd_jacobian, spectral_radius};
use crate::mep::partition_function;

fn default_d() -> f64 {
    5.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosureKind {
    Gaussian10,
    Linearized13,
    /// Polytropic gas with `D` degrees of freedom.
    Polyatomic6 {
        #[serde(default = "default_d")]
        d: f64,
    },
}

impl ClosureKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClosureKind::Gaussian10 => "gaussian10",
            ClosureKind::Linearized13 => "linearized13",
            ClosureKind::Polyatomic6 { .. } => "polyatomic6",
        }
    }
}

/// Macroscopic fields of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellFields {
    pub rho: f64,
    pub v: [f64; 3],
    /// `kB T / m` of the local equilibrium.
    pub theta: f64,
    /// Pressure tensor (for the six-moment system `(p + Pi) I`).
    pub p: [[f64; 3]; 3],
    pub pi: f64,
    pub q: [f64; 3],
}

impl CellFields {
    pub fn pressure(&self) -> f64 {
        self.rho * self.theta
    }
}

#[derive(Debug, Clone)]
struct Layout {
    rho: usize,
    mom: [usize; 3],
    second: [[usize; 3]; 3],
    heat: [usize; 3],
    fll: usize,
    gll: usize,
}

#[derive(Debug, Clone)]
pub struct SimClosure {
    pub kind: ClosureKind,
    pub basis: MomentBasis,
    /// `kB / m`
    pub r: f64,
    at: Layout,
}

const NONE: usize = usize::MAX;

fn unit2(i: usize, j: usize) -> Moment {
    Moment::Monomial(MultiIndex::unit(i).add(&MultiIndex::unit(j)))
}

fn binom(n: u32, k: u32) -> f64 {
    const T: [[f64; 6]; 6] = [
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 3.0, 3.0, 1.0, 0.0, 0.0],
        [1.0, 4.0, 6.0, 4.0, 1.0, 0.0],
        [1.0, 5.0, 10.0, 10.0, 5.0, 1.0],
    ];
    T[n as usize][k as usize]
}

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// Raw moments `rho <xi^alpha>` for `|alpha| <= 4`, indexed `[a][b][c]`.
type RawTable = [[[f64; 5]; 5]; 5];

impl SimClosure {
    pub fn new(kind: ClosureKind, gas: &GasModel) -> Result<Self> {
        let basis = match kind {
            ClosureKind::Gaussian10 => MomentBasis::full(2, crate::basis::PhaseSpace::Classical),
            ClosureKind::Linearized13 => MomentBasis::grad13(),
            ClosureKind::Polyatomic6 { d } => {
                if !(d > 3.0 && d.is_finite()) {
                    return Err(Error::InvalidInput(format!("polytropic D must exceed 3, got {d}")));
                }
                MomentBasis::six_moment()
            }
        };
        let pos = |m: &Moment| basis.position(m).unwrap_or(NONE);
        let mut at = Layout {
            rho: pos(&Moment::Monomial(MultiIndex::ZERO)),
            mom: [0; 3],
            second: [[NONE; 3]; 3],
            heat: [NONE; 3],
            fll: pos(&Moment::Trace(MultiIndex::ZERO)),
            gll: pos(&Moment::Energy(MultiIndex::ZERO)),
        };
        for i in 0..3 {
            at.mom[i] = pos(&Moment::Monomial(MultiIndex::unit(i)));
            at.heat[i] = pos(&Moment::Trace(MultiIndex::unit(i)));
            for j in 0..3 {
                at.second[i][j] = pos(&unit2(i, j));
            }
        }
        Ok(SimClosure {
            kind,
            basis,
            r: gas.r(),
            at,
        })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    fn d(&self) -> f64 {
        match self.kind {
            ClosureKind::Polyatomic6 { d } => d,
            _ => 3.0,
        }
    }

    /// Upper bound of `Pi / p`, i.e. `eps^I / eps^K = (D - 3)/3`.
    pub fn pi_upper(&self) -> f64 {
        (self.d() - 3.0) / 3.0
    }

    pub fn fields(&self, u: &[f64]) -> Result<CellFields> {
        if u.len() != self.len() || u.iter().any(|x| !x.is_finite()) {
            return Err(Error::DegenerateState("cell state is not a finite moment vector".into()));
        }
        let a = &self.at;
        let rho = u[a.rho];
        if !(rho > 0.0) {
            return Err(Error::DegenerateState(format!("density must be positive, got {rho}")));
        }
        let v = [u[a.mom[0]] / rho, u[a.mom[1]] / rho, u[a.mom[2]] / rho];
        let v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        let mut p = [[0.0; 3]; 3];
        let (theta, pi);
        let mut q = [0.0; 3];
        match self.kind {
            ClosureKind::Gaussian10 | ClosureKind::Linearized13 => {
                for i in 0..3 {
                    for j in 0..3 {
                        p[i][j] = u[a.second[i][j]] - rho * v[i] * v[j];
                    }
                }
                theta = (p[0][0] + p[1][1] + p[2][2]) / (3.0 * rho);
                pi = 0.0;
                if self.kind == ClosureKind::Linearized13 {
                    let pll = 3.0 * rho * theta;
                    for i in 0..3 {
                        let vp: f64 = (0..3).map(|j| v[j] * p[j][i]).sum();
                        q[i] = 0.5 * (u[a.heat[i]] - rho * v2 * v[i] - 2.0 * vp - v[i] * pll);
                    }
                }
            }
            ClosureKind::Polyatomic6 { d } => {
                // G_ll = rho v^2 + 2 rho eps, eps = (D/2) theta.
                theta = (u[a.gll] - rho * v2) / (d * rho);
                pi = (u[a.fll] - rho * v2) / 3.0 - rho * theta;
                for (i, row) in p.iter_mut().enumerate() {
                    row[i] = rho * theta + pi;
                }
            }
        }
        if !(theta > 0.0) {
            return Err(Error::DegenerateState(format!("temperature must be positive, got theta = {theta}")));
        }
        Ok(CellFields { rho, v, theta, p, pi, q })
    }

    /// Equilibrium moment vector for `(rho, v, kB T / m)`.
    pub fn equilibrium_from(&self, rho: f64, v: [f64; 3], theta: f64) -> Vec<f64> {
        let a = &self.at;
        let mut u = vec![0.0; self.len()];
        let p = rho * theta;
        let v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        u[a.rho] = rho;
        for i in 0..3 {
            u[a.mom[i]] = rho * v[i];
        }
        match self.kind {
            ClosureKind::Gaussian10 | ClosureKind::Linearized13 => {
                for i in 0..3 {
                    for j in i..3 {
                        u[a.second[i][j]] = rho * v[i] * v[j] + p * delta(i, j);
                    }
                }
                if self.kind == ClosureKind::Linearized13 {
                    for i in 0..3 {
                        u[a.heat[i]] = v[i] * (rho * v2 + 5.0 * p);
                    }
                }
            }
            ClosureKind::Polyatomic6 { d } => {
                u[a.fll] = rho * v2 + 3.0 * p;
                u[a.gll] = rho * v2 + d * p;
            }
        }
        u
    }

    /// Local equilibrium with the same conserved moments.
    pub fn equilibrium(&self, u: &[f64]) -> Result<Vec<f64>> {
        let f = self.fields(u)?;
        Ok(self.equilibrium_from(f.rho, f.v, f.theta))
    }

    /// Components copied unchanged by the relaxation step.
    pub fn conserved_components(&self) -> Vec<usize> {
        let a = &self.at;
        let mut c = vec![a.rho, a.mom[0], a.mom[1], a.mom[2]];
        if let ClosureKind::Polyatomic6 { .. } = self.kind {
            c.push(a.gll);
        }
        c
    }

    /// Mass, momentum and energy-like density: `F, F_i` and `F_ll`
    /// (`G_ll` for the six-moment system).
    pub fn conserved(&self, u: &[f64]) -> [f64; 5] {
        let a = &self.at;
        let energy = match self.kind {
            ClosureKind::Polyatomic6 { .. } => u[a.gll],
            _ => u[a.second[0][0]] + u[a.second[1][1]] + u[a.second[2][2]],
        };
        [u[a.rho], u[a.mom[0]], u[a.mom[1]], u[a.mom[2]], energy]
    }

    fn raw_table(&self, f: &CellFields) -> RawTable {
        let mut central: RawTable = [[[0.0; 5]; 5]; 5];
        let theta = f.theta;
        let pr = f.pressure();
        let mut sigma = f.p;
        for (i, row) in sigma.iter_mut().enumerate() {
            row[i] -= pr;
        }
        for a in 0..5u32 {
            for b in 0..5 - a {
                for c in 0..5 - a - b {
                    let mut idx = Vec::with_capacity(4);
                    for (k, n) in [a, b, c].iter().enumerate() {
                        for _ in 0..*n {
                            idx.push(k);
                        }
                    }
                    central[a as usize][b as usize][c as usize] = match idx.len() {
                        0 => f.rho,
                        1 => 0.0,
                        2 => f.p[idx[0]][idx[1]],
                        3 => {
                            let (i, j, k) = (idx[0], idx[1], idx[2]);
                            0.4 * (f.q[i] * delta(j, k) + f.q[j] * delta(i, k) + f.q[k] * delta(i, j))
                        }
                        _ => {
                            let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
                            match self.kind {
                                ClosureKind::Gaussian10 => {
                                    let p = &f.p;
                                    (p[i][j] * p[k][l] + p[i][k] * p[j][l] + p[i][l] * p[j][k]) / f.rho
                                }
                                _ => {
                                    let s = &sigma;
                                    pr * theta
                                        * (delta(i, j) * delta(k, l)
                                            + delta(i, k) * delta(j, l)
                                            + delta(i, l) * delta(j, k))
                                        + theta
                                            * (s[i][j] * delta(k, l)
                                                + s[k][l] * delta(i, j)
                                                + s[i][k] * delta(j, l)
                                                + s[j][l] * delta(i, k)
                                                + s[i][l] * delta(j, k)
                                                + s[j][k] * delta(i, l))
                                }
                            }
                        }
                    };
                }
            }
        }
        let v = f.v;
        let mut raw: RawTable = [[[0.0; 5]; 5]; 5];
        for a in 0..5u32 {
            for b in 0..5 - a {
                for c in 0..5 - a - b {
                    let mut s = 0.0;
                    for ga in 0..=a {
                        for gb in 0..=b {
                            for gc in 0..=c {
                                s += binom(a, ga)
                                    * binom(b, gb)
                                    * binom(c, gc)
                                    * v[0].powi((a - ga) as i32)
                                    * v[1].powi((b - gb) as i32)
                                    * v[2].powi((c - gc) as i32)
                                    * central[ga as usize][gb as usize][gc as usize];
                            }
                        }
                    }
                    raw[a as usize][b as usize][c as usize] = s;
                }
            }
        }
        raw
    }

    /// Closed flux `F_{1A}` in the x direction.
    pub fn flux_x(&self, u: &[f64]) -> Result<Vec<f64>> {
        let f = self.fields(u)?;
        if let ClosureKind::Polyatomic6 { d } = self.kind {
            let a = &self.at;
            let v2 = f.v[0] * f.v[0] + f.v[1] * f.v[1] + f.v[2] * f.v[2];
            let pt = f.pressure() + f.pi;
            let mut out = vec![0.0; self.len()];
            out[a.rho] = f.rho * f.v[0];
            for i in 0..3 {
                out[a.mom[i]] = f.rho * f.v[0] * f.v[i] + pt * delta(0, i);
            }
            out[a.fll] = f.v[0] * (f.rho * v2 + 5.0 * pt);
            out[a.gll] = f.v[0] * (f.rho * v2 + d * f.pressure() + 2.0 * pt);
            return Ok(out);
        }
        let raw = self.raw_table(&f);
        let get = |m: &MultiIndex| raw[m.p as usize][m.q as usize][m.r as usize];
        let e1 = MultiIndex::unit(0);
        let out = self
            .basis
            .elements
            .iter()
            .map(|el| match el {
                Moment::Monomial(b) => get(&b.add(&e1)),
                Moment::Trace(b) => (0..3)
                    .map(|l| get(&b.add(&e1).add(&MultiIndex::unit(l)).add(&MultiIndex::unit(l))))
                    .sum(),
                Moment::Energy(_) => unreachable!("energy moments only occur in the six-moment system"),
            })
            .collect();
        Ok(out)
    }

    /// Spectral radius of the x-flux Jacobian. Closed form for the Gaussian
    /// system, central differences otherwise.
    pub fn max_speed(&self, u: &[f64]) -> Result<f64> {
        let f = self.fields(u)?;
        if self.kind == ClosureKind::Gaussian10 {
            return Ok(f.v[0].abs() + (3.0 * f.p[0][0] / f.rho).sqrt());
        }
        let jac = self.jacobian_x(u)?;
        let lam = spectral_radius(&jac)?;
        if !lam.is_finite() {
            return Err(Error::NotHyperbolic("non-finite characteristic speed".into()));
        }
        Ok(lam)
    }

    /// x-flux Jacobian by central differences.
    pub fn jacobian_x(&self, u: &[f64]) -> Result<DMatrix<f64>> {
        let f = self.fields(u)?;
        let c = f.theta.sqrt() + (f.v[0] * f.v[0] + f.v[1] * f.v[1] + f.v[2] * f.v[2]).sqrt();
        let steps: Vec<f64> = self
            .basis
            .elements
            .iter()
            .map(|e| 1e-6 * f.rho * c.powi(e.velocity_degree() as i32))
            .collect();
        fd_jacobian(|w| self.flux_x(w), u, &steps)
    }

    /// `Ok(())` when the cell is admissible for this closure.
    pub fn check_realizable(&self, u: &[f64]) -> std::result::Result<(), String> {
        let f = self.fields(u).map_err(|e| e.to_string())?;
        match self.kind {
            ClosureKind::Gaussian10 | ClosureKind::Linearized13 => {
                let p = Matrix3::from_fn(|i, j| f.p[i][j]);
                if p.cholesky().is_none() {
                    return Err("pressure tensor is not positive definite".into());
                }
            }
            ClosureKind::Polyatomic6 { .. } => {
                let r = f.pi / f.pressure();
                if !(r > -1.0 && r < self.pi_upper()) {
                    return Err(format!("Pi/p = {r} outside (-1, {})", self.pi_upper()));
                }
            }
        }
        Ok(())
    }

    /// Entropy density of the Gaussian closure by quadrature; `None` for the
    /// other systems.
    pub fn entropy_density(&self, u: &[f64], gas: &GasModel) -> Option<Result<f64>> {
        if self.kind != ClosureKind::Gaussian10 {
            return None;
        }
        Some((|| {
            let f = self.fields(u)?;
            let params = GaussianParams {
                rho: f.rho,
                v: f.v,
                p: f.p,
            };
            let g = GaussianClosure::new(params, gas)?;
            let theta = Matrix3::from_fn(|i, j| f.p[i][j] / f.rho);
            let l = theta
                .cholesky()
                .ok_or_else(|| Error::NotPositiveDefinite("pressure tensor".into()))?
                .l();
            let scale = [
                [l[(0, 0)], 0.0, 0.0],
                [l[(1, 0)], l[(1, 1)], 0.0],
                [l[(2, 0)], l[(2, 1)], l[(2, 2)]],
            ];
            let quad = Quadrature::new(3, 4, f.v, scale, None, gas)?;
            let pf = partition_function(gas)?;
            use crate::closures::Distribution;
            Ok(quad
                .nodes
                .iter()
                .map(|n| n.weight * pf.entropy_of(g.value(&n.xi, 0.0)))
                .sum())
        })())
    }

    pub fn csv_header(&self) -> &'static str {
        match self.kind {
            ClosureKind::Gaussian10 => "x,rho,v1,v2,v3,T,P11,P12,P13,P22,P23,P33",
            ClosureKind::Linearized13 => "x,rho,v1,v2,v3,T,P11,P12,P13,P22,P23,P33,q1,q2,q3",
            ClosureKind::Polyatomic6 { .. } => "x,rho,v1,v2,v3,T,Pi",
        }
    }

    /// Primitive columns after `x`, matching [`SimClosure::csv_header`].
    pub fn csv_fields(&self, u: &[f64]) -> Result<Vec<f64>> {
        let f = self.fields(u)?;
        let mut out = vec![f.rho, f.v[0], f.v[1], f.v[2], f.theta / self.r];
        match self.kind {
            ClosureKind::Polyatomic6 { .. } => out.push(f.pi),
            _ => {
                for (i, j) in [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)] {
                    out.push(f.p[i][j]);
                }
                if self.kind == ClosureKind::Linearized13 {
                    out.extend_from_slice(&f.q);
                }
            }
        }
        Ok(out)
    }
}
