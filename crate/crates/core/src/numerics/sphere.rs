//! Icosahedral point sets on the unit sphere and smooth maximization over it.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

/// The twelve vertices of the regular icosahedron, normalized.
pub fn icosahedron_vertices() -> Vec<Vector3<f64>> {
    let phi = 0.5 * (1.0 + 5f64.sqrt());
    let mut v = Vec::with_capacity(12);
    for &s1 in &[-1.0, 1.0] {
        for &s2 in &[-1.0, 1.0] {
            v.push(Vector3::new(0.0, s1, s2 * phi));
            v.push(Vector3::new(s1, s2 * phi, 0.0));
            v.push(Vector3::new(s2 * phi, 0.0, s1));
        }
    }
    v.into_iter().map(|x| x.normalize()).collect()
}

fn icosahedron_faces(v: &[Vector3<f64>]) -> Vec<[usize; 3]> {
    // Adjacent vertices sit at the minimal pairwise distance.
    let n = v.len();
    let mut dmin = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            dmin = dmin.min((v[i] - v[j]).norm());
        }
    }
    let adj = |i: usize, j: usize| ((v[i] - v[j]).norm() - dmin).abs() < 1e-9;
    let mut faces = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if adj(i, j) && adj(j, k) && adj(i, k) {
                    faces.push([i, j, k]);
                }
            }
        }
    }
    faces
}

/// Geodesic grid from subdividing each icosahedron edge into `freq` parts.
/// Contains `10 freq^2 + 2` points; `freq = 4` gives 162.
pub fn geodesic_points(freq: usize) -> Vec<Vector3<f64>> {
    let verts = icosahedron_vertices();
    let faces = icosahedron_faces(&verts);
    let mut pts: Vec<Vector3<f64>> = Vec::new();
    let f = freq as f64;
    for face in faces {
        let (a, b, c) = (verts[face[0]], verts[face[1]], verts[face[2]]);
        for i in 0..=freq {
            for j in 0..=freq - i {
                let k = freq - i - j;
                let p = (a * i as f64 + b * j as f64 + c * k as f64) / f;
                let p = p.normalize();
                if !pts.iter().any(|q| (q - p).norm() < 1e-9) {
                    pts.push(p);
                }
            }
        }
    }
    pts
}

/// Value, Euclidean gradient and Euclidean Hessian of a function on R^3.
pub type Jet = (f64, Vector3<f64>, Matrix3<f64>);

/// Maximum of `f` restricted to the unit sphere.
///
/// Samples `samples`, then refines the best few candidates by Riemannian
/// Newton iteration (falling back to gradient ascent where the Riemannian
/// Hessian is not negative definite).
pub fn maximize<F: Fn(&Vector3<f64>) -> Jet>(
    f: F,
    samples: &[Vector3<f64>],
    tol: f64,
) -> (f64, Vector3<f64>) {
    let mut scored: Vec<(f64, Vector3<f64>)> = samples.iter().map(|t| (f(t).0, *t)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = scored[0];
    for &(_, t0) in scored.iter().take(6) {
        let (v, t) = refine(&f, t0, tol);
        if v.is_finite() && v > best.0 {
            best = (v, t);
        }
    }
    best
}

fn tangent_basis(t: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let helper = if t.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let e1 = (helper - t * t.dot(&helper)).normalize();
    let e2 = t.cross(&e1);
    (e1, e2)
}

fn refine<F: Fn(&Vector3<f64>) -> Jet>(f: &F, t0: Vector3<f64>, tol: f64) -> (f64, Vector3<f64>) {
    let mut t = t0.normalize();
    let (mut val, mut g, mut h) = f(&t);
    for _ in 0..100 {
        let (e1, e2) = tangent_basis(&t);
        let gr = Vector2::new(e1.dot(&g), e2.dot(&g));
        let radial = t.dot(&g);
        let hr = Matrix2::new(
            e1.dot(&(h * e1)) - radial,
            e1.dot(&(h * e2)),
            e2.dot(&(h * e1)),
            e2.dot(&(h * e2)) - radial,
        );
        let scale = hr.abs().max().max(gr.norm()).max(1e-300);
        let negdef = hr[(0, 0)] < 0.0 && hr.determinant() > 0.0;
        let step = if negdef {
            -hr.try_inverse().map(|m| m * gr).unwrap_or(gr / scale)
        } else {
            gr / scale
        };
        let step = if step.norm() > 0.5 { step * (0.5 / step.norm()) } else { step };
        if !(step.norm() >= 1e-14) {
            break;
        }
        let mut alpha = 1.0;
        let mut moved = false;
        for _ in 0..40 {
            let cand = (t + (e1 * step.x + e2 * step.y) * alpha).normalize();
            let jet = f(&cand);
            if jet.0.is_finite() && jet.0 >= val - tol * 1e-6 * (1.0 + val.abs()) {
                let gain = jet.0 - val;
                t = cand;
                (val, g, h) = jet;
                moved = true;
                if gain.abs() <= 1e-16 * (1.0 + val.abs()) && alpha * step.norm() < 1e-10 {
                    return (val, t);
                }
                break;
            }
            alpha *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (val, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(icosahedron_vertices().len(), 12);
        assert_eq!(geodesic_points(1).len(), 12);
        assert_eq!(geodesic_points(4).len(), 162);
    }

    #[test]
    fn maximizes_quadratic_form() {
        // max of t^T M t on the sphere is the largest eigenvalue.
        let m = Matrix3::new(1.0, 0.3, 0.0, 0.3, -2.0, 0.5, 0.0, 0.5, 0.7);
        let f = |t: &Vector3<f64>| ((t.transpose() * m * t)[0], 2.0 * m * t, 2.0 * m);
        let (v, _) = maximize(f, &geodesic_points(4), 1e-8);
        let lmax = m.symmetric_eigenvalues().max();
        assert!((v - lmax).abs() < 1e-12, "{v} vs {lmax}");
    }
}
