//! Closure coefficients and the triple tensor `A^{abc}` of the 14-moment
//! relativistic system.

use nalgebra::{Matrix2, Matrix3, Matrix4};
use serde::{Deserialize, Serialize};

use super::equilibrium::{minkowski, RelEquilibrium};
use super::integrals::{i_table, j_from_i, j_prime_from_i};
use super::RelGas;
use crate::error::{Error, Result};

/// Rank-3 contravariant tensor.
pub type Tensor3 = [[[f64; 4]; 4]; 4];

/// Contravariant metric `diag(+1, -1, -1, -1)`.
const G: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosureCoefficients {
    pub c01: f64,
    pub cpi1: f64,
    pub c03: f64,
    pub c05: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientDeterminants {
    pub pi_num: Matrix3<f64>,
    pub pi_den: Matrix3<f64>,
    pub q_num: Matrix2<f64>,
    pub q_den: Matrix2<f64>,
    pub j60: f64,
    pub j61: f64,
}

/// `J'` matrices behind `C_pi^1`, `C_0^3` and `C_0^5`, rows in display order.
pub fn coefficient_determinants(alpha: f64, gamma: f64, gas: &RelGas) -> Result<CoefficientDeterminants> {
    let i = i_table(alpha, gamma, gas)?;
    let k = gas.m / (gas.kb * gamma);
    let jp = |mu, nu| j_prime_from_i(mu, nu, &i, k).expect("listed pair");
    Ok(CoefficientDeterminants {
        pi_num: Matrix3::new(
            jp(2, 1), jp(2, 2), jp(2, 3),
            jp(2, 2), jp(2, 3), jp(2, 4),
            jp(4, 1), jp(4, 2), jp(4, 3),
        ),
        pi_den: Matrix3::new(
            jp(2, 1), jp(2, 2), jp(2, 3),
            jp(2, 2), jp(2, 3), jp(2, 4),
            jp(4, 0), jp(4, 1), jp(4, 2),
        ),
        q_num: Matrix2::new(jp(4, 0), jp(4, 1), jp(4, 2), jp(4, 3)),
        q_den: Matrix2::new(jp(4, 0), jp(4, 1), jp(4, 1), jp(4, 2)),
        j60: jp(6, 0),
        j61: jp(6, 1),
    })
}

/// `det` is treated as zero below `1e-14` of the Hadamard bound.
fn checked_ratio(name: &str, num: f64, den: f64, hadamard: f64) -> Result<f64> {
    if !(den.abs() > 1e-14 * hadamard) || !den.is_finite() {
        return Err(Error::SingularDenominator {
            name: name.into(),
            value: den,
        });
    }
    Ok(num / den)
}

fn hadamard3(m: &Matrix3<f64>) -> f64 {
    m.row_iter().map(|r| r.norm()).product()
}

fn hadamard2(m: &Matrix2<f64>) -> f64 {
    m.row_iter().map(|r| r.norm()).product()
}

/// `C_pi^1 = (6/c^2) det(num) / det(den)`.
pub fn pi_coefficient(num: &Matrix3<f64>, den: &Matrix3<f64>, c: f64) -> Result<f64> {
    Ok(6.0 / (c * c) * checked_ratio("C_pi^1", num.determinant(), den.determinant(), hadamard3(den))?)
}

/// `C_0^3 = -(1/5) det(num) / det(den)`.
pub fn heat_coefficient(num: &Matrix2<f64>, den: &Matrix2<f64>) -> Result<f64> {
    Ok(-0.2 * checked_ratio("C_0^3", num.determinant(), den.determinant(), hadamard2(den))?)
}

pub fn closure_coefficients(alpha: f64, gamma: f64, gas: &RelGas) -> Result<ClosureCoefficients> {
    let eq = super::equilibrium_state(alpha, gamma, gas)?;
    let d = coefficient_determinants(alpha, gamma, gas)?;
    let j41 = j_from_i(4, 1, alpha, gamma, gas)?.expect("listed pair");
    let c01 = gas.m * eq.n + 8.0 * std::f64::consts::PI * gas.y * gas.m.powi(4) * gas.c.powi(3) * j41;
    let out = ClosureCoefficients {
        c01,
        cpi1: pi_coefficient(&d.pi_num, &d.pi_den, gas.c)?,
        c03: heat_coefficient(&d.q_num, &d.q_den)?,
        c05: checked_ratio("C_0^5", d.j61, d.j60, d.j60.abs().max(f64::MIN_POSITIVE))?,
    };
    if ![out.c01, out.cpi1, out.c03, out.c05].iter().all(|x| x.is_finite()) {
        return Err(Error::SingularDenominator {
            name: "closure coefficients".into(),
            value: f64::NAN,
        });
    }
    Ok(out)
}

/// Fourteen-field nonequilibrium data: four-velocity, dynamic pressure,
/// heat-flux four-vector and deviatoric shear tensor (contravariant).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelNoneqState {
    pub u: [f64; 4],
    pub pi: f64,
    pub q: [f64; 4],
    pub t: [[f64; 4]; 4],
}

fn lower(v: &[f64; 4]) -> [f64; 4] {
    [v[0], -v[1], -v[2], -v[3]]
}

fn norm_e(v: &[f64; 4]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl RelNoneqState {
    /// State in the rest frame `U = (c, 0, 0, 0)` from spatial heat flux and
    /// a symmetric traceless spatial shear.
    pub fn rest_frame(c: f64, pi: f64, q: [f64; 3], shear: [[f64; 3]; 3]) -> Self {
        let mut t = [[0.0; 4]; 4];
        for i in 0..3 {
            for j in 0..3 {
                t[i + 1][j + 1] = shear[i][j];
            }
        }
        RelNoneqState {
            u: [c, 0.0, 0.0, 0.0],
            pi,
            q: [0.0, q[0], q[1], q[2]],
            t,
        }
    }

    pub fn validate(&self, c: f64) -> Result<()> {
        const TOL: f64 = 1e-12;
        let c2 = c * c;
        let uu = minkowski(&self.u, &self.u);
        if !((uu - c2).abs() <= TOL * c2) {
            return Err(Error::StateConstraintViolation(format!("U.U = {uu}, expected {c2}")));
        }
        let un = norm_e(&self.u);
        let qu = minkowski(&self.q, &self.u);
        if !(qu.abs() <= TOL * norm_e(&self.q) * un) {
            return Err(Error::StateConstraintViolation(format!("q.U = {qu:e}")));
        }
        let tmax = self.t.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
        let ul = lower(&self.u);
        let mut trace = 0.0;
        for a in 0..4 {
            trace += G[a] * self.t[a][a];
            let mut tu = 0.0;
            for b in 0..4 {
                if (self.t[a][b] - self.t[b][a]).abs() > TOL * tmax {
                    return Err(Error::StateConstraintViolation("shear tensor is not symmetric".into()));
                }
                tu += self.t[a][b] * ul[b];
            }
            if !(tu.abs() <= TOL * 4.0 * tmax * un) {
                return Err(Error::StateConstraintViolation(format!("t.U component {a} = {tu:e}")));
            }
        }
        if !(trace.abs() <= TOL * 4.0 * tmax) {
            return Err(Error::StateConstraintViolation(format!("shear trace = {trace:e}")));
        }
        if !self.pi.is_finite() {
            return Err(Error::StateConstraintViolation("dynamic pressure is not finite".into()));
        }
        Ok(())
    }

    /// Applies a Lorentz transformation to `U`, `q` and `t`.
    pub fn transformed(&self, l: &Matrix4<f64>) -> Self {
        let vec = |v: &[f64; 4]| {
            let mut o = [0.0; 4];
            for (a, oa) in o.iter_mut().enumerate() {
                *oa = (0..4).map(|b| l[(a, b)] * v[b]).sum();
            }
            o
        };
        let mut t = [[0.0; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let mut s = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        s += l[(a, i)] * l[(b, j)] * self.t[i][j];
                    }
                }
                t[a][b] = s;
            }
        }
        RelNoneqState {
            u: vec(&self.u),
            pi: self.pi,
            q: vec(&self.q),
            t,
        }
    }
}

/// Five-term closure of `A^{abc}` around the equilibrium `eq`.
pub fn triple_tensor(
    eq: &RelEquilibrium,
    state: &RelNoneqState,
    coeffs: &ClosureCoefficients,
    gas: &RelGas,
) -> Result<Tensor3> {
    state.validate(gas.c)?;
    let c2 = gas.c * gas.c;
    let (u, q, t) = (&state.u, &state.q, &state.t);
    let g = |a: usize, b: usize| if a == b { G[a] } else { 0.0 };
    let k_u = coeffs.c01 + coeffs.cpi1 * state.pi;
    let k_g = c2 / 6.0 * (eq.n * gas.m - coeffs.c01 - coeffs.cpi1 * state.pi);
    let mut out = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let uuu = u[a] * u[b] * u[c];
                let gu = g(a, b) * u[c] + g(a, c) * u[b] + g(b, c) * u[a];
                let gq = g(a, b) * q[c] + g(a, c) * q[b] + g(b, c) * q[a];
                let uuq = u[a] * u[b] * q[c] + u[a] * u[c] * q[b] + u[b] * u[c] * q[a];
                let tu = t[a][b] * u[c] + t[a][c] * u[b] + t[b][c] * u[a];
                out[a][b][c] = k_u * uuu + k_g * gu + coeffs.c03 * gq - 6.0 / c2 * coeffs.c03 * uuq + coeffs.c05 * tu;
            }
        }
    }
    Ok(out)
}

/// Boost taking the rest frame to one moving with 3-velocity `v`.
pub fn boost_matrix(v: [f64; 3], c: f64) -> Result<Matrix4<f64>> {
    let b = [v[0] / c, v[1] / c, v[2] / c];
    let b2 = b.iter().map(|x| x * x).sum::<f64>();
    if !(b2 < 1.0) {
        return Err(Error::InvalidInput(format!("boost speed must be below c, got |v|/c = {}", b2.sqrt())));
    }
    let gl = 1.0 / (1.0 - b2).sqrt();
    let mut l = Matrix4::identity();
    l[(0, 0)] = gl;
    for i in 0..3 {
        l[(0, i + 1)] = gl * b[i];
        l[(i + 1, 0)] = gl * b[i];
        for j in 0..3 {
            if b2 > 0.0 {
                l[(i + 1, j + 1)] += (gl - 1.0) * b[i] * b[j] / b2;
            }
        }
    }
    Ok(l)
}

pub fn boost_tensor3(l: &Matrix4<f64>, a: &Tensor3) -> Tensor3 {
    // contract one slot at a time
    let mut t1 = [[[0.0; 4]; 4]; 4];
    let mut t2 = [[[0.0; 4]; 4]; 4];
    let mut t3 = [[[0.0; 4]; 4]; 4];
    for x in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                t1[x][j][k] = (0..4).map(|i| l[(x, i)] * a[i][j][k]).sum();
            }
        }
    }
    for x in 0..4 {
        for y in 0..4 {
            for k in 0..4 {
                t2[x][y][k] = (0..4).map(|j| l[(y, j)] * t1[x][j][k]).sum();
            }
        }
    }
    for x in 0..4 {
        for y in 0..4 {
            for z in 0..4 {
                t3[x][y][z] = (0..4).map(|k| l[(z, k)] * t2[x][y][k]).sum();
            }
        }
    }
    t3
}

/// `g_{bc} A^{abc}`.
pub fn trace_contraction(a: &Tensor3) -> [f64; 4] {
    let mut o = [0.0; 4];
    for (x, ox) in o.iter_mut().enumerate() {
        *ox = (0..4).map(|b| G[b] * a[x][b][b]).sum();
    }
    o
}
