//! Gauss rules for the unit Gaussian weight and the generalized Laguerre
//! weight, computed by Newton iteration on the three-term recurrences.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

/// A one-dimensional rule `sum_k w[k] g(x[k])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    /// Weights for integrands that already contain the weight function.
    pub weights: Vec<f64>,
    /// Weights with the weight function divided out, so that the rule
    /// integrates a plain integrand over the real line / half line.
    pub plain_weights: Vec<f64>,
}

/// Gauss–Hermite rule for the standard normal density `exp(-x^2/2)/sqrt(2 pi)`.
///
/// `weights` sum to one; `plain_weights[k] = weights[k] * sqrt(2 pi) * exp(x_k^2/2)`
/// so that `sum plain_weights[k] g(x_k)` approximates `int g(x) dx`, exactly
/// when `g` is a Gaussian times a polynomial of degree `< 2n`.
pub fn hermite_normal(n: usize) -> Rule {
    assert!(n >= 1, "Gauss-Hermite rule needs at least one node");
    let mut x_phys = vec![0.0; n];
    let mut w_phys = vec![0.0; n];
    let pim4 = PI.powf(-0.25);
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x_phys[0],
            3 => 1.91 * z - 0.91 * x_phys[1],
            _ => 2.0 * z - x_phys[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let (p1, dp) = hermite_orthonormal(n, z, pim4);
            pp = dp;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                let (_, dp) = hermite_orthonormal(n, z, pim4);
                pp = dp;
                break;
            }
        }
        x_phys[i] = z;
        x_phys[n - 1 - i] = -z;
        w_phys[i] = 2.0 / (pp * pp);
        w_phys[n - 1 - i] = w_phys[i];
    }
    if n % 2 == 1 {
        x_phys[n / 2] = 0.0;
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut plain = Vec::with_capacity(n);
    // Ascending order, exactly antisymmetric.
    for k in (0..n).rev() {
        let xp = x_phys[k];
        nodes.push(sqrt2 * xp);
        weights.push(w_phys[k] / PI.sqrt());
        plain.push(sqrt2 * w_phys[k] * (xp * xp).exp());
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Rule {
        nodes,
        weights,
        plain_weights: plain,
    }
}

fn hermite_orthonormal(n: usize, z: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

/// Generalized Gauss–Laguerre rule for the weight `x^a exp(-x)` on `[0, inf)`.
///
/// `plain_weights[k] = weights[k] * exp(x_k) / x_k^a` integrates `int g(x) dx`.
pub fn laguerre(n: usize, a: f64) -> Rule {
    assert!(n >= 1, "Gauss-Laguerre rule needs at least one node");
    assert!(a > -1.0, "Laguerre exponent must exceed -1");
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut z: f64 = 0.0;
    for i in 0..n {
        let fi = i as f64;
        z = match i {
            0 => (1.0 + a) * (3.0 + 0.92 * a) / (1.0 + 2.4 * nf + 1.8 * a),
            1 => z + (15.0 + 6.25 * a) / (1.0 + 0.9 * a + 2.5 * nf),
            _ => {
                let ai = fi - 1.0;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * a / (1.0 + 3.5 * ai))
                    * (z - nodes[i - 2])
                    / (1.0 + 0.3 * a)
            }
        };
        let mut pp = 0.0;
        let mut p2 = 0.0;
        for _ in 0..200 {
            let (p1, p2v, ppv) = laguerre_eval(n, a, z);
            pp = ppv;
            p2 = p2v;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1e-300) {
                let (_, p2v, ppv) = laguerre_eval(n, a, z);
                pp = ppv;
                p2 = p2v;
                break;
            }
        }
        nodes[i] = z;
        weights[i] = -(ln_gamma(a + nf) - ln_gamma(nf)).exp() / (pp * nf * p2);
    }
    let plain = nodes
        .iter()
        .zip(&weights)
        .map(|(&x, &w)| w * (x - a * x.ln()).exp())
        .collect();
    Rule {
        nodes,
        weights,
        plain_weights: plain,
    }
}

fn laguerre_eval(n: usize, a: f64, z: f64) -> (f64, f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf - 1.0 + a - z) * p2 - (jf - 1.0 + a) * p3) / jf;
    }
    let nf = n as f64;
    let pp = (nf * p1 - (nf + a) * p2) / z;
    (p1, p2, pp)
}
