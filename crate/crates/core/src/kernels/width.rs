//! Finite-propagation approximation of a positive-definite kernel.
//!
//! Take the positive square root `V` of the kernel matrix `U`, zero every
//! entry of `V` at word distance beyond `w`, and square the masked matrix
//! `W` back.  The product `W W` is again positive semidefinite (it is a
//! Gram matrix), vanishes exactly beyond distance `2w`, and approximates
//! `U` with an error controlled by operator norms:
//!
//! ```text
//! sup |U - WW| <= |V - W| (2 |V| + |V - W|).
//! ```

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::kernels::linalg::{psd_sqrt, spectral_norm};
use crate::kernels::matrix::KernelMatrix;
use crate::Result;

/// Measured quality of one finite-width approximation.
#[derive(Clone, Copy, Debug)]
pub struct WidthReport {
    /// Mask width `w`; the approximant is supported within `2w`.
    pub width: u32,
    /// Largest entrywise deviation from the original kernel.
    pub sup_error: f64,
    /// The operator-norm bound the deviation must respect.
    pub op_bound: f64,
    /// Smallest eigenvalue of the approximant (a Gram matrix, so this
    /// should only be negative by rounding).
    pub min_eigenvalue: f64,
    /// Largest absolute approximant entry at word distance beyond `2w`;
    /// exactly zero by construction.
    pub beyond_support: f64,
}

/// Symmetric product `W W` with a fixed per-entry summation order, so the
/// result is exactly symmetric whenever `W` is.
fn symmetric_square(w: &DMatrix<f64>) -> DMatrix<f64> {
    let n = w.nrows();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0.0f64; n];
            for (j, slot) in row.iter_mut().enumerate() {
                let mut acc = 0.0f64;
                for l in 0..n {
                    acc += w[(i, l)] * w[(l, j)];
                }
                *slot = acc;
            }
            row
        })
        .collect();
    let mut flat = Vec::with_capacity(n * n);
    for row in rows {
        flat.extend_from_slice(&row);
    }
    DMatrix::from_row_slice(n, n, &flat)
}

/// Builds the width-`w` approximant of `kernel` and measures it.
pub fn finite_width_approx(
    kernel: &KernelMatrix,
    width: u32,
    psd_tol: f64,
) -> Result<WidthReport> {
    let n = kernel.n();
    let u = kernel.entries();
    let v = psd_sqrt(u, psd_tol)?;

    let mut w = v.clone();
    for i in 0..n {
        for j in 0..n {
            if kernel.word_dist(i, j) > width {
                w[(i, j)] = 0.0;
            }
        }
    }
    // The mask is symmetric, but enforce exact equality so the squared
    // matrix is exactly symmetric too.
    for i in 0..n {
        for j in (i + 1)..n {
            let val = w[(i, j)];
            w[(j, i)] = val;
        }
    }
    let approx = symmetric_square(&w);

    let mut sup_error = 0.0f64;
    let mut beyond = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            sup_error = sup_error.max((u[(i, j)] - approx[(i, j)]).abs());
            if kernel.word_dist(i, j) > 2 * width {
                beyond = beyond.max(approx[(i, j)].abs());
            }
        }
    }

    let err = spectral_norm(&(&v - &w))?;
    let v_norm = spectral_norm(&v)?;
    let op_bound = err * (2.0 * v_norm + err);
    debug_assert!(sup_error <= op_bound + 1e-9);

    let min_eigenvalue = crate::kernels::linalg::min_eigenvalue(&approx)?;

    Ok(WidthReport {
        width,
        sup_error,
        op_bound,
        min_eigenvalue,
        beyond_support: beyond,
    })
}
