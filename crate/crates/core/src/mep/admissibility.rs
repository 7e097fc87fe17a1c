//! Integrability of the closure distribution.
//!
//! With `f = F'(chi)` decaying like `exp(-m chi / kB)`, the moments converge
//! iff the leading velocity form of `chi` is positive on the unit sphere. We
//! report it in main-field form `u' = -Lambda`, i.e.
//! `nu_N(t) = -sum_{deg A = N} Lambda_A psi_A^lead(t)`, admissible iff `N` is
//! even and `max nu_N < 0`.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use super::MultiplierVector;
use crate::basis::{Moment, MomentBasis, MultiIndex};
use crate::numerics::sphere;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// `max_t nu_N(t)` over unit directions.
    pub a_n: f64,
    pub direction: [f64; 3],
    /// Degree of the deciding form: the top degree `N`, or a lower even
    /// degree when the higher forms are negligible on the thermal scale.
    pub degree: u32,
    pub reason: Option<String>,
}

/// Degree-`d` part of `-chi` expanded into monomials.
fn form_of_degree(basis: &MomentBasis, lambda: &[f64], d: u32) -> Vec<(f64, MultiIndex)> {
    let mut terms: Vec<(f64, MultiIndex)> = Vec::new();
    let mut push = |c: f64, a: MultiIndex| {
        if let Some(t) = terms.iter_mut().find(|(_, b)| *b == a) {
            t.0 += c;
        } else {
            terms.push((c, a));
        }
    };
    for (e, l) in basis.elements.iter().zip(lambda) {
        if e.velocity_degree() != d {
            continue;
        }
        match e {
            Moment::Monomial(a) => push(-l, *a),
            Moment::Trace(a) | Moment::Energy(a) => {
                for i in 0..basis.dim {
                    let u = MultiIndex::unit(i);
                    push(-l, a.add(&u.add(&u)));
                }
            }
        }
    }
    terms
}

/// Relative size below which a top-degree form is treated as absent.
pub const NEGLIGIBLE_FORM: f64 = 1e-10;

fn jet(terms: &[(f64, MultiIndex)], t: &Vector3<f64>) -> sphere::Jet {
    let mut v = 0.0;
    let mut g = Vector3::zeros();
    let mut h = Matrix3::zeros();
    let pw = |x: f64, k: i64| if k < 0 { 0.0 } else { crate::basis::ipow(x, k as u32) };
    for (c, a) in terms {
        let k = a.powers().map(|x| x as i64);
        let base = |d: [i64; 3]| -> f64 {
            // coefficient from differentiation times remaining powers
            let mut val = 1.0;
            for i in 0..3 {
                let mut coef = 1.0;
                for j in 0..d[i] {
                    coef *= (k[i] - j) as f64;
                }
                val *= coef * pw(t[i], k[i] - d[i]);
            }
            val
        };
        v += c * base([0, 0, 0]);
        for i in 0..3 {
            let mut d = [0; 3];
            d[i] = 1;
            g[i] += c * base(d);
            for j in 0..3 {
                let mut d2 = [0; 3];
                d2[i] += 1;
                d2[j] += 1;
                h[(i, j)] += c * base(d2);
            }
        }
    }
    (v, g, h)
}

/// `nu_N(t)` for the basis' top degree.
pub fn nu_n(lambda: &MultiplierVector, t: &[f64; 3]) -> f64 {
    let n = lambda.basis.velocity_degree();
    eval_form(&form_of_degree(&lambda.basis, &lambda.values, n), t)
}

fn eval_form(terms: &[(f64, MultiIndex)], t: &[f64; 3]) -> f64 {
    terms.iter().map(|(c, a)| c * a.eval(t)).sum()
}

/// `(max nu, argmax, max |nu|)` over unit directions.
fn form_extremes(dim: usize, terms: &[(f64, MultiIndex)]) -> (f64, [f64; 3], f64) {
    if terms.iter().all(|(c, _)| *c == 0.0) {
        return (0.0, [1.0, 0.0, 0.0], 0.0);
    }
    if dim == 1 {
        let p = eval_form(terms, &[1.0, 0.0, 0.0]);
        let m = eval_form(terms, &[-1.0, 0.0, 0.0]);
        let mag = p.abs().max(m.abs());
        return if p >= m { (p, [1.0, 0.0, 0.0], mag) } else { (m, [-1.0, 0.0, 0.0], mag) };
    }
    let pts = sphere::geodesic_points(4);
    let (v, t) = sphere::maximize(|t| jet(terms, t), &pts, 1e-8);
    let neg: Vec<(f64, MultiIndex)> = terms.iter().map(|(c, a)| (-c, *a)).collect();
    let (w, _) = sphere::maximize(|t| jet(&neg, t), &pts, 1e-8);
    (v, [t[0], t[1], t[2]], v.abs().max(w.abs()))
}

pub fn admissibility_check(lambda: &MultiplierVector) -> AdmissibilityReport {
    let basis = &lambda.basis;
    let top = basis.velocity_degree();
    let mut n = top;
    let (mut a_n, mut dir, _) = form_extremes(basis.dim, &form_of_degree(basis, &lambda.values, n));
    // A top form that vanishes on the thermal scale (equilibrium on a large
    // basis) leaves the next even degree in charge of integrability.
    if top >= 4 && top % 2 == 0 {
        let (_, _, m2) = form_extremes(basis.dim, &form_of_degree(basis, &lambda.values, 2));
        if m2 > 0.0 {
            let c2 = 1.0 / (2.0 * m2);
            let negligible = |d: u32| {
                let (_, _, m) = form_extremes(basis.dim, &form_of_degree(basis, &lambda.values, d));
                m * c2.powf(d as f64 / 2.0) <= NEGLIGIBLE_FORM * m2 * c2
            };
            while n > 2 && negligible(n) && negligible(n - 1) {
                n -= 2;
            }
            if n != top {
                (a_n, dir, _) = form_extremes(basis.dim, &form_of_degree(basis, &lambda.values, n));
            }
        }
    }
    let mut reason = None;
    if n % 2 == 1 || n == 0 {
        reason = Some(format!("top velocity degree {n} is not a positive even number"));
    } else if !(a_n < 0.0) {
        reason = Some(format!("leading form is not negative definite (a_N = {a_n:e})"));
    }
    if reason.is_none() {
        // Integrability in the internal energy: the coefficient of 2I/m must
        // be positive and velocity independent.
        for (e, l) in basis.elements.iter().zip(&lambda.values) {
            if let Moment::Energy(a) = e {
                if a.order() == 0 && !(*l > 0.0) {
                    reason = Some(format!("internal-energy multiplier must be positive, got {l:e}"));
                } else if a.order() > 0 && *l != 0.0 {
                    reason = Some("velocity-dependent internal-energy multiplier".into());
                }
            }
        }
    }
    AdmissibilityReport {
        admissible: reason.is_none(),
        a_n,
        direction: dir,
        degree: n,
        reason,
    }
}

/// Structural part of the check: can any multiplier vector on this basis be
/// admissible?
pub fn basis_admits_closure(basis: &MomentBasis) -> Result<(), String> {
    let n = basis.velocity_degree();
    if n == 0 || n % 2 == 1 {
        return Err(format!(
            "top velocity degree N = {n} is odd or zero; the moment integrals of the closure diverge"
        ));
    }
    if basis
        .elements
        .iter()
        .any(|e| matches!(e, Moment::Energy(a) if a.order() > 0))
    {
        return Err("velocity-dependent internal-energy moments make the closure non-integrable".into());
    }
    Ok(())
}
