//! Convergence of the kernel family `u_k` toward the constant one, with
//! positive definiteness and finite-width support at every stage.
//!
//! As `k` grows, `u_k(x, y) = exp(-|f(x) - f(y)|^2 / k)` tends to `1`
//! uniformly on any bounded window, each member stays positive definite,
//! and each member admits a finite-propagation approximant of preset
//! accuracy.  Those three facts together are the sampled form of the
//! support condition the embeddings are built to satisfy.

use crate::embeddings::EmbeddingSpec;
use crate::kernels::linalg::min_eigenvalue;
use crate::kernels::matrix::gaussian_kernel;
use crate::kernels::width::finite_width_approx;
use crate::report::{CheckReport, Verdict};
use crate::spaces::Space;
use crate::Result;

#[derive(Clone, Copy, Debug)]
pub struct ConvergenceOptions {
    /// Ball radius the kernels are sampled on.
    pub radius: u32,
    /// Entrywise accuracy the finite-width approximants must reach.
    pub target_error: f64,
    /// Slack below zero tolerated from eigenvalue rounding.
    pub psd_tol: f64,
    /// Cap on ball enumeration.
    pub ball_cap: u64,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        Self {
            radius: 4,
            target_error: 0.05,
            psd_tol: 1e-9,
            ball_cap: crate::spaces::DEFAULT_BALL_CAP,
        }
    }
}

/// Checks the family `u_k` for `k` in `ks` (which must be increasing).
pub fn convergence_support_check(
    space: &Space,
    spec: &EmbeddingSpec,
    ks: &[f64],
    opts: &ConvergenceOptions,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("kernel-convergence", Verdict::Pass);
    if ks.len() < 2 {
        report.verdict = Verdict::Inconclusive;
        return Ok(report.with_detail("need at least two kernel parameters"));
    }
    if !ks.windows(2).all(|w| w[0] < w[1]) {
        report.verdict = Verdict::Inconclusive;
        return Ok(report.with_detail("kernel parameters must increase"));
    }
    let mut last_gap = f64::INFINITY;
    let mut max_width = 0u32;
    for &k in ks {
        let kernel = gaussian_kernel(space, spec, opts.radius, k, opts.ball_cap)?;
        let lambda_min = min_eigenvalue(kernel.entries())?;
        if lambda_min < -opts.psd_tol {
            report.verdict = Verdict::Fail;
            report = report.with_detail(format!(
                "k={k}: kernel has eigenvalue {lambda_min:.3e} below tolerance"
            ));
            continue;
        }
        // Distance to the constant kernel over the sampled window.
        let max_img2 = (0..=kernel.max_word_dist())
            .filter_map(|d| kernel.max_img2_at(d))
            .fold(0.0f64, f64::max);
        let gap = 1.0 - (-max_img2 / k).exp();
        if gap >= last_gap {
            report.verdict = Verdict::Fail;
            report = report.with_detail(format!(
                "k={k}: distance to the constant kernel did not shrink \
                 ({gap:.6} after {last_gap:.6})"
            ));
        }
        // Smallest width whose approximant meets the target accuracy.
        let mut found = None;
        for w in 1..=(2 * opts.radius) {
            let wr = finite_width_approx(&kernel, w, opts.psd_tol)?;
            if wr.sup_error <= opts.target_error {
                found = Some((w, wr.sup_error));
                break;
            }
        }
        match found {
            Some((w, err)) => {
                max_width = max_width.max(w);
                report = report.with_detail(format!(
                    "k={k}: gap to one {gap:.6}, width {w} reaches error {err:.3e}, \
                     min eigenvalue {lambda_min:.3e}"
                ));
            }
            None => {
                report.verdict = Verdict::Fail;
                report = report.with_detail(format!(
                    "k={k}: no width up to {} reaches error {}",
                    2 * opts.radius,
                    opts.target_error
                ));
            }
        }
        last_gap = last_gap.min(gap);
    }
    report = report
        .with_constant("kernels", ks.len() as f64)
        .with_constant("final_gap", last_gap)
        .with_constant("max_width", max_width as f64)
        .with_range(1.0, (2 * opts.radius) as f64);
    Ok(report)
}
