//! Dense symmetric linear algebra used by the kernel checks.
//!
//! Everything here is deterministic: eigendecompositions come from the
//! symmetric solver, and the power iteration starts from the all-ones
//! vector instead of a random one.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Largest matrix side the eigensolver paths accept.  Beyond this the
/// cubic cost stops being interactive; callers fall back to the power
/// iteration, which only needs matrix-vector products.
pub const EIGEN_CAP: usize = 4000;

fn check_square(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Domain(format!(
            "matrix is {}x{}, not square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() > EIGEN_CAP {
        return Err(Error::Capacity {
            predicted: m.nrows() as u64,
            cap: EIGEN_CAP as u64,
        });
    }
    Ok(m.nrows())
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_square(m)?;
    let mut values: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    let values = symmetric_eigenvalues(m)?;
    values
        .first()
        .copied()
        .ok_or_else(|| Error::Domain("empty matrix has no eigenvalues".into()))
}

/// Operator norm of a symmetric matrix: the largest absolute eigenvalue.
pub fn spectral_norm(m: &DMatrix<f64>) -> Result<f64> {
    let values = symmetric_eigenvalues(m)?;
    Ok(values
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs())))
}

/// Symmetric square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-tol, 0)` are treated as numerical noise and clamped
/// to zero; anything below `-tol` is a genuine negativity and an error.
/// The result is made exactly symmetric entry by entry.
pub fn psd_sqrt(m: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    let n = check_square(m)?;
    let se = m.clone().symmetric_eigen();
    let mut roots = DVector::zeros(n);
    for (i, &lambda) in se.eigenvalues.iter().enumerate() {
        if lambda < -tol {
            return Err(Error::Domain(format!(
                "matrix is not positive semidefinite: eigenvalue {lambda:.3e} \
                 below tolerance {tol:.1e}"
            )));
        }
        roots[i] = lambda.max(0.0).sqrt();
    }
    let q = se.eigenvectors;
    let mut v = &q * DMatrix::from_diagonal(&roots) * q.transpose();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (v[(i, j)] + v[(j, i)]);
            v[(i, j)] = avg;
            v[(j, i)] = avg;
        }
    }
    Ok(v)
}

/// Dominant eigenvalue of a symmetric matrix with nonnegative entries,
/// which for such matrices equals the operator norm.  Starts from the
/// all-ones vector so repeated runs agree bit for bit.
pub fn power_iteration_norm(m: &DMatrix<f64>, max_iters: usize, tol: f64) -> f64 {
    let n = m.nrows();
    if n == 0 {
        return 0.0;
    }
    let mut v = DVector::from_element(n, (n as f64).sqrt().recip());
    let mut lambda = 0.0f64;
    for _ in 0..max_iters {
        let w = m * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = v.dot(&w);
        v = w / norm;
        if (next - lambda).abs() <= tol * next.abs().max(1.0) {
            return next;
        }
        lambda = next;
    }
    lambda
}
