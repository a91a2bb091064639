//! Positive-definite kernels induced by embeddings, and the linear-algebra
//! checks that run on them: positivity, Schur-multiplier norm bounds with
//! geometric tails, finite-propagation approximation, and convergence of a
//! kernel family toward the constant function.

pub mod convergence;
pub mod linalg;
pub mod matrix;
pub mod schur;
pub mod width;

pub use convergence::{convergence_support_check, ConvergenceOptions};
pub use linalg::{
    min_eigenvalue, power_iteration_norm, psd_sqrt, spectral_norm, symmetric_eigenvalues,
    EIGEN_CAP,
};
pub use matrix::{gaussian_kernel, KernelMatrix};
pub use schur::{schur_multiplier_analysis, SchurAnalysis, SchurParams};
pub use width::{finite_width_approx, WidthReport};
