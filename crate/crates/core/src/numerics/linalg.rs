//! Dense linear algebra on top of nalgebra.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

/// Condition number above which [`solve_spd`] adds a ridge.
pub const RIDGE_CONDITION: f64 = 1e12;

/// Result of a regularized symmetric positive-definite solve.
#[derive(Debug, Clone)]
pub struct SpdSolve {
    pub x: DVector<f64>,
    /// Condition number of the Jacobi-scaled matrix before regularization.
    pub condition: f64,
    /// Ridge added to the scaled matrix (zero when none was needed).
    pub ridge: f64,
}

/// Solves `A x = b` for symmetric positive-(semi)definite `A`.
///
/// The matrix is first scaled to unit diagonal; when the scaled condition
/// number exceeds [`RIDGE_CONDITION`] a ridge is added so that it no longer
/// does.
pub fn solve_spd(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<SpdSolve> {
    let n = a.nrows();
    let mut d = DVector::zeros(n);
    for i in 0..n {
        let aii = a[(i, i)];
        if !(aii > 0.0) || !aii.is_finite() {
            return Err(Error::SingularLinearSystem(format!(
                "non-positive diagonal entry {aii:e} at {i}"
            )));
        }
        d[i] = 1.0 / aii.sqrt();
    }
    let mut s = DMatrix::from_fn(n, n, |i, j| d[i] * a[(i, j)] * d[j]);
    s = (&s + s.transpose()) * 0.5;
    let eig = s.clone().symmetric_eigenvalues();
    let lmax = eig.max();
    let lmin = eig.min();
    let condition = if lmin > 0.0 { lmax / lmin } else { f64::INFINITY };
    let mut ridge = 0.0;
    if condition > RIDGE_CONDITION {
        ridge = lmax / RIDGE_CONDITION + (-lmin).max(0.0);
        for i in 0..n {
            s[(i, i)] += ridge;
        }
    }
    let rhs = b.component_mul(&d);
    let chol = s.cholesky().ok_or_else(|| {
        Error::SingularLinearSystem("Cholesky factorization failed after regularization".into())
    })?;
    let y = chol.solve(&rhs);
    Ok(SpdSolve {
        x: y.component_mul(&d),
        condition,
        ridge,
    })
}

/// Returns `(A + A^T)/2` and the relative asymmetry `max|A - A^T| / max|A|`.
pub fn symmetrize(a: &DMatrix<f64>) -> (DMatrix<f64>, f64) {
    let diff = (a - a.transpose()).abs().max();
    let scale = a.abs().max();
    let res = if scale > 0.0 { diff / scale } else { 0.0 };
    ((a + a.transpose()) * 0.5, res)
}

/// Eigenvalues of the symmetric pencil `A x = lambda B x` with `B` positive
/// definite, sorted ascending. Uses the congruence `L^{-1} A L^{-T}`.
pub fn pencil_eigenvalues(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Vec<f64>> {
    let chol = b
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotHyperbolic("temporal matrix is not positive definite".into()))?;
    let l = chol.l();
    let n = a.nrows();
    // C = L^{-1} A L^{-T}
    let mut w = a.clone();
    if !l.solve_lower_triangular_mut(&mut w) {
        return Err(Error::SingularLinearSystem("triangular solve failed".into()));
    }
    let mut wt = w.transpose();
    if !l.solve_lower_triangular_mut(&mut wt) {
        return Err(Error::SingularLinearSystem("triangular solve failed".into()));
    }
    let c = (&wt + wt.transpose()) * 0.5;
    let mut ev: Vec<f64> = c.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    debug_assert_eq!(ev.len(), n);
    Ok(ev)
}

/// True when the symmetric matrix admits a Cholesky factorization.
pub fn is_positive_definite(a: &DMatrix<f64>) -> bool {
    let (s, _) = symmetrize(a);
    s.cholesky().is_some()
}


/// Eigenvalues of a general real matrix.
///
/// Computed with faer: the Schur iteration in nalgebra does not terminate on
/// some Jacobians of states at rest.
pub fn general_eigenvalues(a: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    if !a.is_square() {
        return Err(Error::InvalidInput("eigenvalues need a square matrix".into()));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularLinearSystem("matrix has non-finite entries".into()));
    }
    let m = faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]);
    let ev = m
        .eigenvalues()
        .map_err(|e| Error::SingularLinearSystem(format!("eigenvalue iteration failed: {e:?}")))?;
    Ok(ev.iter().map(|z| Complex::new(z.re, z.im)).collect())
}
