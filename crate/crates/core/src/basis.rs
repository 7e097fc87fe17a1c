//! Truncated moment bases, gas models and velocity-space quadrature.
//!
//! A basis is an ordered list of weight functions `psi_A(xi, I)`; moments are
//! `F_A = m * int f psi_A dxi` (with `phi(I) dI` added on the extended phase
//! space). Everything downstream addresses moments by basis position.

use nalgebra::{DMatrix, Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::numerics::gauss;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseSpace {
    Classical,
    ClassicalWithInternalEnergy,
}

/// Powers of `xi_1, xi_2, xi_3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    pub p: u32,
    pub q: u32,
    pub r: u32,
}

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex { p: 0, q: 0, r: 0 };

    pub fn new(p: u32, q: u32, r: u32) -> Self {
        MultiIndex { p, q, r }
    }

    /// Unit index along axis `i` (0-based).
    pub fn unit(i: usize) -> Self {
        let mut m = MultiIndex::ZERO;
        match i {
            0 => m.p = 1,
            1 => m.q = 1,
            _ => m.r = 1,
        }
        m
    }

    pub fn order(&self) -> u32 {
        self.p + self.q + self.r
    }

    pub fn add(&self, o: &MultiIndex) -> MultiIndex {
        MultiIndex::new(self.p + o.p, self.q + o.q, self.r + o.r)
    }

    pub fn powers(&self) -> [u32; 3] {
        [self.p, self.q, self.r]
    }

    pub fn eval(&self, x: &[f64; 3]) -> f64 {
        ipow(x[0], self.p) * ipow(x[1], self.q) * ipow(x[2], self.r)
    }

    fn sort_key(&self) -> (u32, u32, u32, u32) {
        (self.order(), self.p, self.q, self.r)
    }
}

#[inline]
pub(crate) fn ipow(x: f64, k: u32) -> f64 {
    match k {
        0 => 1.0,
        1 => x,
        2 => x * x,
        3 => x * x * x,
        4 => {
            let y = x * x;
            y * y
        }
        _ => x.powi(k as i32),
    }
}

/// One basis weight function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum Moment {
    /// `xi^alpha`
    Monomial(MultiIndex),
    /// `xi^2 * xi^alpha`
    Trace(MultiIndex),
    /// `(xi^2 + 2 I / m) * xi^alpha`
    Energy(MultiIndex),
}

impl Moment {
    /// Polynomial degree in the velocity.
    pub fn velocity_degree(&self) -> u32 {
        match self {
            Moment::Monomial(a) => a.order(),
            Moment::Trace(a) | Moment::Energy(a) => a.order() + 2,
        }
    }

    pub fn eval(&self, xi: &[f64; 3], energy: f64, m: f64) -> f64 {
        match self {
            Moment::Monomial(a) => a.eval(xi),
            Moment::Trace(a) => (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) * a.eval(xi),
            Moment::Energy(a) => {
                (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2] + 2.0 * energy / m) * a.eval(xi)
            }
        }
    }

    /// Leading homogeneous velocity part evaluated at `t` (the internal
    /// energy contributes only to lower velocity degrees).
    pub fn leading(&self, t: &[f64; 3]) -> f64 {
        match self {
            Moment::Monomial(a) => a.eval(t),
            Moment::Trace(a) | Moment::Energy(a) => (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]) * a.eval(t),
        }
    }

    pub fn label(&self) -> String {
        fn idx(a: &MultiIndex) -> String {
            let mut s = String::new();
            for (k, c) in a.powers().iter().zip(['1', '2', '3']) {
                for _ in 0..*k {
                    s.push(c);
                }
            }
            s
        }
        match self {
            Moment::Monomial(a) if a.order() == 0 => "F".into(),
            Moment::Monomial(a) => format!("F_{}", idx(a)),
            Moment::Trace(a) => format!("F_ll{}", idx(a)),
            Moment::Energy(a) => format!("G_ll{}", idx(a)),
        }
    }
}

/// Ordered set of basis weight functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentBasis {
    /// Truncation order of the hierarchy.
    pub n: u32,
    /// Number of velocity components (1 or 3).
    pub dim: usize,
    pub phase_space: PhaseSpace,
    pub elements: Vec<Moment>,
}

fn monomials(n: u32, dim: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for p in 0..=n {
        if dim == 1 {
            out.push(MultiIndex::new(p, 0, 0));
            continue;
        }
        for q in 0..=n - p {
            for r in 0..=n - p - q {
                out.push(MultiIndex::new(p, q, r));
            }
        }
    }
    out.sort_by_key(|m| m.sort_key());
    out
}

impl MomentBasis {
    /// All monomials of order `<= n`; the extended phase space adds
    /// `(xi^2 + 2I/m) {1, xi_i}`.
    pub fn full(n: u32, phase_space: PhaseSpace) -> Self {
        let mut elements: Vec<Moment> = monomials(n, 3).into_iter().map(Moment::Monomial).collect();
        if phase_space == PhaseSpace::ClassicalWithInternalEnergy {
            elements.push(Moment::Energy(MultiIndex::ZERO));
            for i in 0..3 {
                elements.push(Moment::Energy(MultiIndex::unit(i)));
            }
        }
        MomentBasis {
            n,
            dim: 3,
            phase_space,
            elements,
        }
    }

    /// Mass, momentum and energy: `1, xi_i, xi^2`.
    pub fn euler() -> Self {
        let mut elements: Vec<Moment> = monomials(1, 3).into_iter().map(Moment::Monomial).collect();
        elements.push(Moment::Trace(MultiIndex::ZERO));
        MomentBasis {
            n: 1,
            dim: 3,
            phase_space: PhaseSpace::Classical,
            elements,
        }
    }

    /// Thirteen moments: `1, xi_i, xi_i xi_j, xi^2 xi_i`.
    pub fn grad13() -> Self {
        let mut elements: Vec<Moment> = monomials(2, 3).into_iter().map(Moment::Monomial).collect();
        for a in monomials(1, 3).into_iter().filter(|a| a.order() == 1) {
            elements.push(Moment::Trace(a));
        }
        MomentBasis {
            n: 3,
            dim: 3,
            phase_space: PhaseSpace::Classical,
            elements,
        }
    }

    /// Polyatomic six moments: `1, xi_i, xi^2, xi^2 + 2I/m`.
    pub fn six_moment() -> Self {
        let mut elements: Vec<Moment> = monomials(1, 3).into_iter().map(Moment::Monomial).collect();
        elements.push(Moment::Trace(MultiIndex::ZERO));
        elements.push(Moment::Energy(MultiIndex::ZERO));
        MomentBasis {
            n: 1,
            dim: 3,
            phase_space: PhaseSpace::ClassicalWithInternalEnergy,
            elements,
        }
    }

    /// Monomials `1, xi, ..., xi^n` of a single velocity component.
    pub fn line(n: u32) -> Self {
        MomentBasis {
            n,
            dim: 1,
            phase_space: PhaseSpace::Classical,
            elements: monomials(n, 1).into_iter().map(Moment::Monomial).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Plain velocity monomials of the basis, in basis order.
    pub fn indices(&self) -> Vec<MultiIndex> {
        self.elements
            .iter()
            .filter_map(|e| match e {
                Moment::Monomial(a) => Some(*a),
                _ => None,
            })
            .collect()
    }

    /// Internal-energy elements `(xi^2 + 2I/m) xi^alpha`.
    pub fn internal_terms(&self) -> Vec<Moment> {
        self.elements
            .iter()
            .copied()
            .filter(|e| matches!(e, Moment::Energy(_)))
            .collect()
    }

    pub fn position(&self, m: &Moment) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }

    pub fn monomial(&self, p: u32, q: u32, r: u32) -> Option<usize> {
        self.position(&Moment::Monomial(MultiIndex::new(p, q, r)))
    }

    /// Highest velocity degree among the elements.
    pub fn velocity_degree(&self) -> u32 {
        self.elements.iter().map(|e| e.velocity_degree()).max().unwrap_or(0)
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements.iter().map(|e| e.label()).collect()
    }

    pub fn eval_into(&self, xi: &[f64; 3], energy: f64, m: f64, out: &mut [f64]) {
        for (o, e) in out.iter_mut().zip(&self.elements) {
            *o = e.eval(xi, energy, m);
        }
    }

    /// Table of basis values, one row per quadrature node.
    pub fn table(&self, quad: &Quadrature, gas: &GasModel) -> DMatrix<f64> {
        let mut t = DMatrix::zeros(quad.nodes.len(), self.len());
        let mut row = vec![0.0; self.len()];
        for (k, node) in quad.nodes.iter().enumerate() {
            self.eval_into(&node.xi, node.energy, gas.m, &mut row);
            for (j, v) in row.iter().enumerate() {
                t[(k, j)] = *v;
            }
        }
        t
    }

    /// Component count of the full classical basis.
    pub fn full_count(n: u32) -> usize {
        let n = n as usize;
        (n + 1) * (n + 2) * (n + 3) / 6
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistics {
    Bose,
    Classical,
    Fermi,
}

impl Statistics {
    /// The sign `s` in `Y / (exp(m chi / kB) + s)`.
    pub fn s(&self) -> f64 {
        match self {
            Statistics::Bose => -1.0,
            Statistics::Classical => 0.0,
            Statistics::Fermi => 1.0,
        }
    }

    pub fn from_sign(s: i32) -> Result<Self> {
        match s {
            -1 => Ok(Statistics::Bose),
            0 => Ok(Statistics::Classical),
            1 => Ok(Statistics::Fermi),
            _ => Err(Error::InvalidInput(format!("statistics sign must be -1, 0 or 1, got {s}"))),
        }
    }
}

/// Gas description shared by the kinetic modules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GasModel {
    pub statistics: Statistics,
    /// Phase-space density constant.
    pub y: f64,
    pub m: f64,
    pub kb: f64,
    /// Exponent `a` of the internal-energy weight `phi(I) = c I^a`.
    pub phi_exponent: Option<f64>,
    /// Prefactor `c` of the weight; chosen so that `int phi e^{-I/(kB T)} dI
    /// = A0 (T/T_ref)^{a+1}` with `A0 = T_ref = 1`.
    pub phi_scale: f64,
}

impl Default for GasModel {
    fn default() -> Self {
        GasModel {
            statistics: Statistics::Classical,
            y: 1.0,
            m: 1.0,
            kb: 1.0,
            phi_exponent: None,
            phi_scale: 1.0,
        }
    }
}

impl GasModel {
    pub fn with_statistics(statistics: Statistics) -> Self {
        GasModel {
            statistics,
            ..Default::default()
        }
    }

    /// Polytropic polyatomic gas with `D` degrees of freedom (`a = (D-5)/2`).
    pub fn polyatomic(d: f64) -> Result<Self> {
        let a = (d - 5.0) / 2.0;
        let mut g = GasModel::default();
        g.set_internal(a, 1.0, 1.0)?;
        Ok(g)
    }

    /// Sets `phi(I) = c I^a` with `c` normalized by `A0` and `T_ref`.
    pub fn set_internal(&mut self, a: f64, a0: f64, t_ref: f64) -> Result<()> {
        if !(a > -1.0) {
            return Err(Error::InvalidInput(format!("phi exponent must exceed -1, got {a}")));
        }
        if !(a0 > 0.0 && t_ref > 0.0) {
            return Err(Error::InvalidInput("A0 and T_ref must be positive".into()));
        }
        self.phi_exponent = Some(a);
        self.phi_scale = a0 * (-ln_gamma(a + 1.0) - (a + 1.0) * (self.kb * t_ref).ln()).exp();
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.y > 0.0 && self.m > 0.0 && self.kb > 0.0) {
            return Err(Error::InvalidInput("Y, m and kB must be positive".into()));
        }
        if let Some(a) = self.phi_exponent {
            if !(a > -1.0) {
                return Err(Error::InvalidInput(format!("phi exponent must exceed -1, got {a}")));
            }
        }
        Ok(())
    }

    /// `kB / m`.
    pub fn r(&self) -> f64 {
        self.kb / self.m
    }

    /// Internal degrees of freedom `D = 2a + 5` (3 for a monatomic gas).
    pub fn degrees_of_freedom(&self) -> f64 {
        self.phi_exponent.map_or(3.0, |a| 2.0 * a + 5.0)
    }
}

/// Moment densities on a basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    pub basis: MomentBasis,
    pub values: Vec<f64>,
}

/// Macroscopic fields read off the low-order moments.
#[derive(Debug, Clone, PartialEq)]
pub struct Macroscopic {
    pub rho: f64,
    pub v: Vector3<f64>,
    /// Kinetic temperature proxy `p / rho` with `p = trace(P)/dim`.
    pub theta: f64,
    /// Full pressure tensor when all second moments are present.
    pub pressure: Option<Matrix3<f64>>,
    /// `kB T^I / m` from the energy moment on the extended phase space.
    pub theta_internal: Option<f64>,
}

impl MomentVector {
    pub fn new(basis: MomentBasis, values: Vec<f64>) -> Result<Self> {
        if values.len() != basis.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} moment values, got {}",
                basis.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("moment values must be finite".into()));
        }
        Ok(MomentVector { basis, values })
    }

    pub fn get(&self, m: &Moment) -> Option<f64> {
        self.basis.position(m).map(|i| self.values[i])
    }

    /// Density, velocity and temperature proxies; `DegenerateState` when the
    /// basis or the values do not determine a positive temperature.
    pub fn macroscopic(&self, gas: &GasModel) -> Result<Macroscopic> {
        let b = &self.basis;
        let rho = self
            .get(&Moment::Monomial(MultiIndex::ZERO))
            .ok_or_else(|| Error::InvalidInput("basis lacks the density moment".into()))?;
        if !(rho > 0.0) {
            return Err(Error::DegenerateState(format!("density must be positive, got {rho}")));
        }
        let mut v = Vector3::zeros();
        for i in 0..b.dim {
            let Some(mi) = self.get(&Moment::Monomial(MultiIndex::unit(i))) else {
                return Err(Error::DegenerateState("basis lacks momentum moments".into()));
            };
            v[i] = mi / rho;
        }
        let mut pressure = None;
        let trace_kin;
        let full_second = (0..b.dim).all(|i| {
            (i..b.dim).all(|j| {
                self.get(&Moment::Monomial(MultiIndex::unit(i).add(&MultiIndex::unit(j))))
                    .is_some()
            })
        });
        if full_second {
            let mut p = Matrix3::zeros();
            for i in 0..b.dim {
                for j in i..b.dim {
                    let f = self
                        .get(&Moment::Monomial(MultiIndex::unit(i).add(&MultiIndex::unit(j))))
                        .unwrap_or(0.0);
                    p[(i, j)] = f - rho * v[i] * v[j];
                    p[(j, i)] = p[(i, j)];
                }
            }
            trace_kin = p.trace();
            if b.dim == 3 {
                pressure = Some(p);
            }
        } else if let Some(fll) = self.get(&Moment::Trace(MultiIndex::ZERO)) {
            trace_kin = fll - rho * v.norm_squared();
        } else {
            return Err(Error::DegenerateState(
                "basis carries no second-order moment; temperature undefined".into(),
            ));
        }
        let theta = trace_kin / (b.dim as f64 * rho);
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::DegenerateState(format!(
                "temperature proxy must be positive, got {theta}"
            )));
        }
        let mut theta_internal = None;
        if let Some(g) = self.get(&Moment::Energy(MultiIndex::ZERO)) {
            let a = gas.phi_exponent.ok_or_else(|| {
                Error::InvalidInput("extended phase space needs a phi exponent".into())
            })?;
            let ti = (g - rho * v.norm_squared() - trace_kin) / (2.0 * rho * (a + 1.0));
            if !(ti > 0.0) || !ti.is_finite() {
                return Err(Error::DegenerateState(format!(
                    "internal temperature proxy must be positive, got {ti}"
                )));
            }
            theta_internal = Some(ti);
        }
        Ok(Macroscopic {
            rho,
            v,
            theta,
            pressure,
            theta_internal,
        })
    }
}

/// A quadrature node in (velocity, internal energy).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub xi: [f64; 3],
    pub energy: f64,
    pub weight: f64,
}

/// Tensor-product Gauss–Hermite grid `xi = center + L y`, optionally times a
/// Gauss–Laguerre grid in the internal energy with `phi(I)` absorbed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub dim: usize,
    pub order: usize,
    pub internal_order: usize,
    pub center: [f64; 3],
    /// Lower-triangular scale matrix `L`.
    pub scale: [[f64; 3]; 3],
    /// `kB T / m`-like scale of the internal-energy grid (energy units are
    /// `m` times this).
    pub internal_scale: f64,
    pub phi_exponent: Option<f64>,
    pub nodes: Vec<Node>,
}

impl Quadrature {
    /// Builds the grid. `scale` must be lower triangular with positive
    /// diagonal; for `dim == 1` only `scale[0][0]` is used.
    pub fn new(
        dim: usize,
        order: usize,
        center: [f64; 3],
        scale: [[f64; 3]; 3],
        internal: Option<(usize, f64)>,
        gas: &GasModel,
    ) -> Result<Self> {
        if dim != 1 && dim != 3 {
            return Err(Error::InvalidInput(format!("velocity dimension must be 1 or 3, got {dim}")));
        }
        if order == 0 {
            return Err(Error::InvalidInput("quadrature order must be positive".into()));
        }
        for i in 0..dim {
            if !(scale[i][i] > 0.0) || !scale[i][i].is_finite() {
                return Err(Error::DegenerateState(format!("non-positive quadrature scale on axis {i}")));
            }
        }
        let rule = gauss::hermite_normal(order);
        let det: f64 = (0..dim).map(|i| scale[i][i]).product();
        let mut vel: Vec<([f64; 3], f64)> = Vec::new();
        if dim == 1 {
            for (y, w) in rule.nodes.iter().zip(&rule.plain_weights) {
                vel.push(([center[0] + scale[0][0] * y, 0.0, 0.0], w * det));
            }
        } else {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        let y = [rule.nodes[a], rule.nodes[b], rule.nodes[c]];
                        let mut xi = center;
                        for i in 0..3 {
                            for (j, yj) in y.iter().enumerate().take(i + 1) {
                                xi[i] += scale[i][j] * yj;
                            }
                        }
                        let w = rule.plain_weights[a] * rule.plain_weights[b] * rule.plain_weights[c];
                        vel.push((xi, w * det));
                    }
                }
            }
        }
        let mut nodes = Vec::new();
        let (internal_order, internal_scale, phi_exponent) = match internal {
            None => {
                nodes.extend(vel.iter().map(|(xi, w)| Node {
                    xi: *xi,
                    energy: 0.0,
                    weight: *w,
                }));
                (0, 0.0, None)
            }
            Some((n_i, theta_i)) => {
                let a = gas.phi_exponent.ok_or_else(|| {
                    Error::InvalidInput("internal-energy grid needs a phi exponent".into())
                })?;
                if !(theta_i > 0.0) {
                    return Err(Error::DegenerateState("non-positive internal scale".into()));
                }
                let kappa = gas.m * theta_i;
                let lag = gauss::laguerre(n_i, a);
                // int g(I) c I^a dI = c kappa^{a+1} sum w_k e^{x_k} g(kappa x_k)
                let pref = gas.phi_scale * kappa.powf(a + 1.0);
                for (x, w) in lag.nodes.iter().zip(&lag.weights) {
                    let wi = pref * w * x.exp();
                    for (xi, wv) in &vel {
                        nodes.push(Node {
                            xi: *xi,
                            energy: kappa * x,
                            weight: wv * wi,
                        });
                    }
                }
                (n_i, theta_i, Some(a))
            }
        };
        Ok(Quadrature {
            dim,
            order,
            internal_order,
            center,
            scale,
            internal_scale,
            phi_exponent,
            nodes,
        })
    }

    /// Standard grid centered at the origin with unit scale.
    pub fn standard(dim: usize, order: usize) -> Result<Self> {
        let mut s = [[0.0; 3]; 3];
        for (i, row) in s.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Quadrature::new(dim, order, [0.0; 3], s, None, &GasModel::default())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integral of the unit-mass Gaussian matched to the grid's center and
    /// scale (times the normalized internal-energy factor); should be 1.
    pub fn self_test(&self, gas: &GasModel) -> f64 {
        let l = Matrix3::from_fn(|i, j| if i < self.dim && j < self.dim { self.scale[i][j] } else if i == j { 1.0 } else { 0.0 });
        let linv = l.try_inverse().unwrap_or_else(Matrix3::identity);
        let det: f64 = (0..self.dim).map(|i| self.scale[i][i]).product();
        let norm = (2.0 * std::f64::consts::PI).powf(self.dim as f64 / 2.0) * det;
        let internal_norm = match self.phi_exponent {
            Some(a) => {
                let kappa = gas.m * self.internal_scale;
                gas.phi_scale * (ln_gamma(a + 1.0) + (a + 1.0) * kappa.ln()).exp()
            }
            None => 1.0,
        };
        self.nodes
            .iter()
            .map(|n| {
                let mut d = Vector3::zeros();
                for i in 0..self.dim {
                    d[i] = n.xi[i] - self.center[i];
                }
                let y = linv * d;
                let g = (-0.5 * y.norm_squared()).exp() / norm;
                let gi = if self.phi_exponent.is_some() {
                    (-n.energy / (gas.m * self.internal_scale)).exp() / internal_norm
                } else {
                    1.0
                };
                n.weight * g * gi
            })
            .sum()
    }
}

/// Grid recentered at the hint's bulk velocity and scaled by its pressure
/// (`L = chol(P / rho)`, or `sqrt(theta)` per axis when only the trace is
/// known). On the extended phase space the internal grid uses `order` nodes
/// as well.
pub fn adapt_quadrature(hint: &MomentVector, order: usize, gas: &GasModel) -> Result<Quadrature> {
    adapt_quadrature_with(hint, order, order, gas)
}

pub fn adapt_quadrature_with(
    hint: &MomentVector,
    order: usize,
    internal_order: usize,
    gas: &GasModel,
) -> Result<Quadrature> {
    let mac = hint.macroscopic(gas)?;
    let dim = hint.basis.dim;
    let mut scale = [[0.0; 3]; 3];
    match (&mac.pressure, dim) {
        (Some(p), 3) => {
            let chol = (p / mac.rho).cholesky().ok_or_else(|| {
                Error::DegenerateState("pressure tensor of the hint is not positive definite".into())
            })?;
            let l = chol.l();
            for i in 0..3 {
                for j in 0..=i {
                    scale[i][j] = l[(i, j)];
                }
            }
        }
        _ => {
            for (i, row) in scale.iter_mut().enumerate().take(dim) {
                row[i] = mac.theta.sqrt();
            }
        }
    }
    let center = [mac.v[0], mac.v[1], mac.v[2]];
    let internal = match hint.basis.phase_space {
        PhaseSpace::ClassicalWithInternalEnergy => {
            let ti = mac.theta_internal.unwrap_or(mac.theta);
            Some((internal_order, ti))
        }
        PhaseSpace::Classical => None,
    };
    Quadrature::new(dim, order, center, scale, internal, gas)
}

/// `F_A = m sum_k w_k f(xi_k, I_k) psi_A(xi_k, I_k)`.
pub fn compute_moments<F>(f: F, basis: &MomentBasis, quad: &Quadrature, gas: &GasModel) -> Result<MomentVector>
where
    F: Fn(&[f64; 3], f64) -> f64,
{
    let mut values = vec![0.0; basis.len()];
    let mut row = vec![0.0; basis.len()];
    for (k, node) in quad.nodes.iter().enumerate() {
        let fv = f(&node.xi, node.energy);
        if !fv.is_finite() {
            return Err(Error::NonFiniteIntegrand { node: k });
        }
        basis.eval_into(&node.xi, node.energy, gas.m, &mut row);
        let w = gas.m * node.weight * fv;
        for (v, r) in values.iter_mut().zip(&row) {
            *v += w * r;
        }
    }
    Ok(MomentVector {
        basis: basis.clone(),
        values,
    })
}
