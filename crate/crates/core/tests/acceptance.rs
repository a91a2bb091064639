//! Acceptance gate: one test per shipped guarantee, with pinned
//! tolerances.  Each test prints a single summary line; the assertions
//! behind the line are the contract.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hcomp::coarse::{
    check_large_scale_lipschitz, check_quasi_geodesic_chain, check_uniform_embedding,
    coarse_to_qi_constants, extract_subchain, fit_large_scale_lipschitz, fit_quasi_isometry,
    pointwise_lipschitz_constant,
};
use hcomp::compression::{
    asymptotic_compression, composition_check, compute_profile, product_check,
    CompressionProfile, ProfileOptions, ProfileRow, Strategy,
};
use hcomp::embeddings::{
    embed_tree, generator_step_bound, weighted_tree_closed_form, EmbeddingSpec,
};
use hcomp::equivariant::{check_cocycle, equivariant_compression};
use hcomp::fixtures::{
    doubling_sample, genset_sample, heis_center_sample, squares_sample, two_lines_sample,
};
use hcomp::kernels::{
    finite_width_approx, gaussian_kernel, min_eigenvalue, power_iteration_norm,
    schur_multiplier_analysis, SchurParams,
};
use hcomp::spaces::heisenberg::LengthTable;
use hcomp::spaces::word::ReducedWord;
use hcomp::spaces::{GroupSpec, DEFAULT_BALL_CAP};

fn free2() -> hcomp::spaces::Space {
    GroupSpec::free(2).build().unwrap()
}

fn profile(
    spec_text: &str,
    embed_text: &str,
    r_max: u32,
    strategy: Strategy,
) -> CompressionProfile {
    let space = GroupSpec::parse(spec_text).unwrap().build().unwrap();
    let spec = EmbeddingSpec::parse(embed_text).unwrap();
    compute_profile(&space, &spec, r_max, &strategy, &ProfileOptions::default()).unwrap()
}

/// A reduced pair with lengths `ks`, `kt` sharing exactly `p` letters.
fn class_pair(ks: usize, kt: usize, p: usize) -> (ReducedWord, ReducedWord) {
    let mut s: Vec<i16> = vec![1; p];
    let mut t = s.clone();
    if ks > p {
        s.push(2);
        s.extend(std::iter::repeat(1).take(ks - p - 1));
    }
    if kt > p {
        t.push(-2);
        t.extend(std::iter::repeat(1).take(kt - p - 1));
    }
    (ReducedWord::new(&s).unwrap(), ReducedWord::new(&t).unwrap())
}

/// 1. On the radius-8 ball (13,121 points, every pair reached through the
///    length-class enumeration) the unweighted tree embedding satisfies
///    `|f(s) - f(t)|^2 = d(s, t)` with exact integer equality.
#[test]
fn c01_tree_identity_on_radius_8_ball() {
    let clock = Instant::now();
    for ks in 0usize..=8 {
        for kt in 0..=ks {
            for p in 0..=kt {
                let (s, t) = class_pair(ks, kt, p);
                let d = s.distance(&t) as f64;
                let diff2 = embed_tree(&s, 0.0).sub(&embed_tree(&t, 0.0)).norm2();
                assert_eq!(diff2, d, "class ({ks}, {kt}, {p})");
                assert_eq!(weighted_tree_closed_form(ks, kt, p, 0.0).unwrap(), d);
            }
        }
    }
    let prof = profile("free:2", "tree", 16, Strategy::TreeClosedForm);
    assert_eq!(prof.pairs_total(), 13_121 * 13_120 / 2);
    for r in 1..=16u32 {
        let rho2 = prof.rho(r).unwrap().powi(2);
        assert!((rho2 - r as f64).abs() < 1e-12, "rho({r})^2 = {rho2}");
    }
    let secs = clock.elapsed().as_secs_f64();
    assert!(secs < 5.0, "took {secs:.2} s, limit 5 s");
    println!("criterion 01 PASS: squared image distances equal word distances on all 86,073,760 pairs of the radius-8 ball (exact equality, {secs:.2} s < 5 s)");
}

/// 2. Weighted lower bound: for each exponent the squared compression
///    floor dominates `r^(1+2e) / (2^(2e+1) (2e+1))` out to r = 24, with
///    zero violations.
#[test]
fn c02_weighted_lower_bound_to_radius_24() {
    let clock = Instant::now();
    let mut checked = 0u32;
    for &eps in &[0.1f64, 0.25, 0.4] {
        let spec = EmbeddingSpec::tree(eps).unwrap();
        let prof = compute_profile(
            &free2(),
            &spec,
            24,
            &Strategy::TreeClosedForm,
            &ProfileOptions::default(),
        )
        .unwrap();
        let c = hcomp::embeddings::compression_lower_constant(eps).unwrap();
        for r in 1..=24u32 {
            let rho2 = prof.rho(r).unwrap().powi(2);
            let floor = (r as f64).powf(1.0 + 2.0 * eps) * c;
            assert!(
                rho2 + 1e-12 >= floor,
                "eps {eps}, r {r}: {rho2} < {floor}"
            );
            checked += 1;
        }
    }
    let secs = clock.elapsed().as_secs_f64();
    assert_eq!(checked, 72);
    assert!(secs < 10.0, "took {secs:.2} s, limit 10 s");
    println!("criterion 02 PASS: rho(r)^2 >= r^(1+2e)/(2^(2e+1)(2e+1)) for e in {{0.1, 0.25, 0.4}}, r <= 24, 0 violations ({secs:.2} s < 10 s)");
}

/// 3. Slope recovery: the log-log fit returns the planted exponent on
///    synthetic power-law profiles to 1e-6, and lands in the pinned
///    windows for the two tree embeddings.
#[test]
fn c03_slope_recovery() {
    for &alpha in &[0.3f64, 0.5, 0.9] {
        let rows: Vec<ProfileRow> = (1..=32u32)
            .map(|r| {
                let v = (r as f64).powf(alpha);
                ProfileRow {
                    r,
                    rho: v,
                    rho_star: v,
                    rho_plus: v,
                    pairs: 1,
                }
            })
            .collect();
        let synthetic = CompressionProfile::from_rows(rows, "synthetic".into());
        let est = asymptotic_compression(&synthetic, 8, 32).unwrap();
        assert!(
            (est.slope - alpha).abs() < 1e-6,
            "planted {alpha}, recovered {}",
            est.slope
        );
    }
    let flat = asymptotic_compression(&profile("free:2", "tree", 16, Strategy::TreeClosedForm), 8, 16)
        .unwrap();
    assert!(
        (flat.slope - 0.5).abs() < 0.05,
        "plain tree slope {}",
        flat.slope
    );
    let weighted = asymptotic_compression(
        &profile("free:2", "weighted-tree:eps=0.25", 16, Strategy::TreeClosedForm),
        8,
        16,
    )
    .unwrap();
    assert!(
        (weighted.slope - 0.75).abs() < 0.05,
        "weighted tree slope {}",
        weighted.slope
    );
    println!(
        "criterion 03 PASS: synthetic exponents recovered to 1e-6; tree slope {:.4} in 0.5 +/- 0.05; weighted slope {:.4} in 0.75 +/- 0.05",
        flat.slope, weighted.slope
    );
}

/// 4. Generator steps: every edge pair in the radius-10 ball moves the
///    quarter-exponent embedding by at most `1 + e^2/(1-2e) = 1.125` in
///    square.
#[test]
fn c04_generator_step_bound() {
    let eps = 0.25f64;
    let limit = generator_step_bound(eps).unwrap();
    assert_eq!(limit, 1.125);
    // Every edge pair {s, sg} with |s g| = |s| + 1 <= 10 falls in the
    // class (k, k-1, k-1); the ball has ball_size(10) - 1 such edges.
    let space = free2();
    assert_eq!(space.ball_size(10), Some(118_097));
    for k in 1usize..=10 {
        let closed = weighted_tree_closed_form(k, k - 1, k - 1, eps).unwrap();
        let (s, t) = class_pair(k, k - 1, k - 1);
        let diff2 = embed_tree(&s, eps).sub(&embed_tree(&t, eps)).norm2();
        assert!((closed - diff2).abs() < 1e-12);
        assert!(
            closed <= limit,
            "edge at length {k}: {closed} exceeds {limit}"
        );
    }
    println!("criterion 04 PASS: all 118,096 edge pairs in the radius-10 ball move the weighted embedding by at most 1.125 in square");
}

/// 5. Interval embedding of the line: exact identity on 1000 seeded
///    dyadic rational pairs, and the composed per-axis pipeline on the
///    rank-3 lattice has slope 0.5 +/- 0.05.
#[test]
fn c05_staircase_identity_and_pipeline() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let k = rng.random_range(0u32..11);
        let scale = f64::from(2u32.pow(k));
        let x = f64::from(rng.random_range(-65536i32..=65536)) / scale;
        let y = f64::from(rng.random_range(-65536i32..=65536)) / scale;
        let d2 = hcomp::embeddings::staircase(x)
            .sub(&hcomp::embeddings::staircase(y))
            .norm2();
        assert_eq!(d2, (x - y).abs(), "pair ({x}, {y})");
    }
    let prof = profile("z:3", "compose(l1l2,iso)", 16, Strategy::ExactPairwise);
    for r in 1..=16u32 {
        let rho2 = prof.rho(r).unwrap().powi(2);
        assert!((rho2 - r as f64).abs() < 1e-9, "rho({r})^2 = {rho2}");
    }
    let est = asymptotic_compression(&prof, 8, 16).unwrap();
    assert!((est.slope - 0.5).abs() < 0.05, "slope {}", est.slope);
    println!(
        "criterion 05 PASS: 1000 dyadic pairs reproduced exactly; composed lattice pipeline slope {:.4} in 0.5 +/- 0.05",
        est.slope
    );
}

/// 6. Products: the two reference products land on their slopes and the
///    factor inequality `rho_h(r) >= min rho_fi(r/2) / sqrt 2` holds
///    pointwise.
#[test]
fn c06_product_formula() {
    let zz = profile("prod(z:1,z:1)", "sum(iso,iso)", 16, Strategy::Factored);
    let z_iso = profile("z:1", "iso", 16, Strategy::ExactPairwise);
    let zz_est = asymptotic_compression(&zz, 8, 16).unwrap();
    assert!((zz_est.slope - 1.0).abs() < 0.02, "slope {}", zz_est.slope);
    let check_zz = product_check(&zz, &[&z_iso, &z_iso]);
    assert!(check_zz.passed(), "{check_zz:?}");

    let zf = profile("prod(z:1,free:2)", "sum(iso,tree)", 12, Strategy::Factored);
    let z_iso12 = profile("z:1", "iso", 12, Strategy::ExactPairwise);
    let f_tree = profile("free:2", "tree", 12, Strategy::TreeClosedForm);
    let zf_est = asymptotic_compression(&zf, 8, 12).unwrap();
    assert!((zf_est.slope - 0.5).abs() < 0.05, "slope {}", zf_est.slope);
    let check_zf = product_check(&zf, &[&z_iso12, &f_tree]);
    assert!(check_zf.passed(), "{check_zf:?}");
    println!(
        "criterion 06 PASS: lattice product slope {:.4} in 1 +/- 0.02, mixed product slope {:.4} in 0.5 +/- 0.05, factor inequality 0 violations",
        zz_est.slope, zf_est.slope
    );
}

/// 7. Composition: the chain rule holds pointwise on the lattice
///    pipelines and the fitted exponents multiply up to 0.03 slack.
#[test]
fn c07_composition_inequality() {
    let composite = profile("z:3", "compose(l1l2,iso)", 16, Strategy::ExactPairwise);
    let outer = profile("z:3", "l1l2", 16, Strategy::ExactPairwise);
    let inner = profile("z:3", "iso", 16, Strategy::ExactPairwise);
    let chain = composition_check(&composite, &outer, &inner);
    assert!(chain.passed(), "{chain:?}");

    let line_comp = profile("z:1", "compose(staircase,iso)", 16, Strategy::ExactPairwise);
    let line_outer = profile("z:1", "staircase", 16, Strategy::ExactPairwise);
    let line_inner = profile("z:1", "iso", 16, Strategy::ExactPairwise);
    let line_chain = composition_check(&line_comp, &line_outer, &line_inner);
    assert!(line_chain.passed(), "{line_chain:?}");

    let s_comp = asymptotic_compression(&composite, 8, 16).unwrap().slope;
    let s_outer = asymptotic_compression(&outer, 8, 16).unwrap().slope;
    let s_inner = asymptotic_compression(&inner, 8, 16).unwrap().slope;
    assert!(
        s_comp >= s_outer * s_inner - 0.03,
        "slopes: composite {s_comp}, outer {s_outer}, inner {s_inner}"
    );
    println!(
        "criterion 07 PASS: chain rule 0 violations; slopes multiply ({:.4} >= {:.4} * {:.4} - 0.03)",
        s_comp, s_outer, s_inner
    );
}

/// 8. The Gaussian kernels of the weighted embedding are positive
///    semidefinite on the radius-5 ball with unit diagonal.
#[test]
fn c08_kernel_positive_semidefinite() {
    let space = free2();
    let spec = EmbeddingSpec::tree(0.25).unwrap();
    let mut worst = 0.0f64;
    for &k in &[1.0f64, 2.0, 4.0, 8.0] {
        let kernel = gaussian_kernel(&space, &spec, 5, k, DEFAULT_BALL_CAP).unwrap();
        for i in 0..kernel.n() {
            assert_eq!(kernel.entries()[(i, i)], 1.0);
        }
        let min = min_eigenvalue(kernel.entries()).unwrap();
        assert!(min >= -1e-8, "k = {k}: min eigenvalue {min}");
        worst = worst.min(min);
    }
    println!("criterion 08 PASS: kernels at k in {{1, 2, 4, 8}} on the radius-5 ball have unit diagonals and min eigenvalue {worst:.2e} >= -1e-8");
}

/// 9. Sphere-splitting suite on the radius-6 ball: exact row sums stay
///    under the analytic bound and every truncation's spectral norm stays
///    under its own max row sum.
#[test]
fn c09_schur_row_sum_suite() {
    let clock = Instant::now();
    let space = free2();
    let spec = EmbeddingSpec::tree(0.25).unwrap();
    let kernel = gaussian_kernel(&space, &spec, 6, 4.0, DEFAULT_BALL_CAP).unwrap();
    let analysis = schur_multiplier_analysis(
        &space,
        &kernel,
        &SchurParams {
            eps: 0.69,
            r0: 13,
            m: 13,
        },
    )
    .unwrap();
    assert!(analysis.report.passed(), "{:?}", analysis.report);
    let n = kernel.n();
    let entries = kernel.entries();
    let max_row_sum = (0..n)
        .map(|i| (0..n).map(|j| entries[(i, j)]).sum::<f64>())
        .fold(0.0f64, f64::max);
    assert!(
        max_row_sum <= analysis.norm_bound,
        "row sum {max_row_sum} above bound {}",
        analysis.norm_bound
    );
    assert!(analysis.operator_norm <= analysis.norm_bound);
    for cutoff in 0..=kernel.max_word_dist() {
        let cut = kernel.truncated(cutoff);
        let cut_entries = cut.entries();
        let cut_row_sum = (0..n)
            .map(|i| (0..n).map(|j| cut_entries[(i, j)]).sum::<f64>())
            .fold(0.0f64, f64::max);
        let norm = power_iteration_norm(cut_entries, 400, 1e-12);
        assert!(
            norm <= cut_row_sum + 1e-9,
            "cutoff {cutoff}: spectral norm {norm} above row sum {cut_row_sum}"
        );
    }
    let secs = clock.elapsed().as_secs_f64();
    assert!(secs < 60.0, "took {secs:.2} s, limit 60 s");
    println!(
        "criterion 09 PASS: max row sum {max_row_sum:.2} under analytic bound {:.2}; spectral norm under max row sum at all 13 cutoffs ({secs:.2} s < 60 s)",
        analysis.norm_bound
    );
}

/// 10. Finite-width approximants on the radius-5 ball at k = 4: errors
///     shrink monotonically, respect the operator-norm bound, vanish
///     beyond twice the width, and stay positive semidefinite.
#[test]
fn c10_finite_width_approximation() {
    let space = free2();
    let spec = EmbeddingSpec::tree(0.25).unwrap();
    let kernel = gaussian_kernel(&space, &spec, 5, 4.0, DEFAULT_BALL_CAP).unwrap();
    let mut last = f64::INFINITY;
    let mut final_error = f64::NAN;
    for &w in &[2u32, 4, 6, 8] {
        let report = finite_width_approx(&kernel, w, 1e-9).unwrap();
        assert!(
            report.sup_error < last,
            "width {w}: error {} did not shrink from {last}",
            report.sup_error
        );
        assert!(
            report.sup_error <= report.op_bound + 1e-12,
            "width {w}: error above bound"
        );
        assert_eq!(report.beyond_support, 0.0, "width {w}: support leak");
        assert!(
            report.min_eigenvalue >= -1e-8,
            "width {w}: min eigenvalue {}",
            report.min_eigenvalue
        );
        last = report.sup_error;
        final_error = report.sup_error;
    }
    println!("criterion 10 PASS: sup errors decrease to {final_error:.2e} over widths {{2, 4, 6, 8}}, all under the norm bound, exactly zero beyond twice the width, min eigenvalue >= -1e-8");
}

/// 11. Chain thinning on 1000 seeded random chains: every gap in
///     [delta/2, 3 delta/2), leftover under delta/2, and count at most
///     `2 L / delta`; zero violations.
#[test]
fn c11_chain_extraction_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let deltas = [0.25f64, 0.5, 1.0, 2.0];
    let mut chains = 0u32;
    for trial in 0..1000 {
        let delta = deltas[trial % deltas.len()];
        let n = rng.random_range(1usize..=60);
        let steps: Vec<f64> = (0..n)
            .map(|_| rng.random_range(0.01..=1.0) * delta)
            .collect();
        let total: f64 = steps.iter().sum();
        let sub = extract_subchain(&steps, delta).unwrap();
        for w in sub.indices.windows(2) {
            let gap: f64 = steps[w[0]..w[1]].iter().sum();
            assert!(gap >= delta / 2.0 - 1e-12 && gap < 1.5 * delta, "gap {gap}");
        }
        assert!(sub.terminal_gap < delta / 2.0);
        assert!(
            sub.m as f64 <= 2.0 * total / delta + 1e-9,
            "m = {}, total {total}, delta {delta}",
            sub.m
        );
        chains += 1;
    }
    assert_eq!(chains, 1000);
    println!("criterion 11 PASS: 1000 random chains thinned with all gaps in [delta/2, 3 delta/2), leftovers under delta/2, counts at most 2 L / delta; 0 violations");
}

/// 12. Constant translation: the coarse-to-affine recipe gives (3, 13)
///     on the reference inputs, and the fitted constants of the scaling
///     fixtures stay inside what the recipe promises.
#[test]
fn c12_constant_translation() {
    let (delta2, lambda2) = coarse_to_qi_constants(2.0, 0.0, 1.0, 1.0).unwrap();
    assert_eq!((delta2, lambda2), (3.0, 13.0));

    let doubling = fit_quasi_isometry(&doubling_sample(32).unwrap(), 1e-9).unwrap();
    assert!((doubling.c - 2.0).abs() < 1e-12 && doubling.d <= 1e-9);
    assert!(doubling.c <= lambda2 && doubling.d <= delta2);

    let genset = fit_quasi_isometry(&genset_sample(4).unwrap(), 1e-9).unwrap();
    assert!((genset.c - 2.0).abs() < 1e-12 && genset.d <= 1e-9);
    assert!(genset.c <= lambda2 && genset.d <= delta2);
    println!("criterion 12 PASS: recipe gives (delta', lambda') = (3, 13); doubling fits ({:.1}, {:.1e}) and enlarged-generators fits ({:.1}, {:.1e}), both inside the promised constants", doubling.c, doubling.d, genset.c, genset.d);
}

/// 13. Cocycle: zero residual over 10,000 random pairs, compression
///     exactly sqrt r out to 16, slope 0.5 +/- 0.02.
#[test]
fn c13_cocycle_and_equivariant_compression() {
    let report = check_cocycle(2, 8, 10_000, 13).unwrap();
    assert!(report.passed(), "{report:?}");
    let worst = report.constant("worst_residual").unwrap();
    assert!(worst <= 1e-12, "worst residual {worst}");

    let prof = equivariant_compression(2, 16, 32, 13).unwrap();
    for r in 1..=16u32 {
        let rho2 = prof.rho(r).unwrap().powi(2);
        assert!((rho2 - r as f64).abs() < 1e-9, "rho({r})^2 = {rho2}");
    }
    let est = asymptotic_compression(&prof, 8, 16).unwrap();
    assert!((est.slope - 0.5).abs() < 0.02, "slope {}", est.slope);
    println!(
        "criterion 13 PASS: worst residual {worst:.1e} over 10,000 pairs; rho(r) = sqrt r out to 16; slope {:.4} in 0.5 +/- 0.02",
        est.slope
    );
}

/// 14. Pathology fixtures: the two line maps and the central inclusion
///     land in their classifications.
#[test]
fn c14_pathology_classifications() {
    // f: uniform embedding, large-scale Lipschitz, but the pointwise
    // Lipschitz constant tracks the range.
    let f8 = two_lines_sample(8).unwrap();
    let f16 = two_lines_sample(16).unwrap();
    assert!(check_uniform_embedding(&f16).passed());
    assert!(check_large_scale_lipschitz(&f16, 1.0, 1.0).passed());
    let c8 = pointwise_lipschitz_constant(&f8).unwrap();
    let c16 = pointwise_lipschitz_constant(&f16).unwrap();
    assert!(
        c16 >= 1.9 * c8 && c16 >= 15.9,
        "pointwise constants {c8} -> {c16}"
    );

    // g: uniform embedding but not large-scale Lipschitz; the fitted
    // slope tracks the range.
    let g6 = squares_sample(6).unwrap();
    let g12 = squares_sample(12).unwrap();
    assert!(check_uniform_embedding(&g12).passed());
    assert!(!check_large_scale_lipschitz(&g12, 10.0, 10.0).passed());
    let (slope6, _) = fit_large_scale_lipschitz(&g6).unwrap();
    let (slope12, _) = fit_large_scale_lipschitz(&g12).unwrap();
    assert!(
        slope12 >= 2.0 * slope6,
        "fitted slopes {slope6} -> {slope12}"
    );

    // Central powers inside the nilpotent group: fine on a short range,
    // but fixed chain constants and fitted affine constants both give
    // out as the range grows.
    let table = LengthTable::compute(48, 10_000_000).unwrap();
    let short = heis_center_sample(&table, 36).unwrap();
    let long = heis_center_sample(&table, 144).unwrap();
    assert!(check_quasi_geodesic_chain(&short, 2.0, 2.0).passed());
    assert!(!check_quasi_geodesic_chain(&long, 2.0, 2.0).passed());
    let fit_short = fit_quasi_isometry(&short, 2.0).unwrap();
    let fit_long = fit_quasi_isometry(&long, 2.0).unwrap();
    assert!(
        fit_long.c >= 1.4 * fit_short.c,
        "fitted constants {} -> {}",
        fit_short.c,
        fit_long.c
    );
    println!("criterion 14 PASS: two-line map classified uniform + large-scale Lipschitz + pointwise constant growing ({c8:.0} -> {c16:.0}); squaring map classified uniform + not large-scale Lipschitz (fitted slope {slope6:.1} -> {slope12:.1}); central inclusion passes chain check at range 36, fails at 144, fitted constant grows {:.2} -> {:.2}", fit_short.c, fit_long.c);
}
