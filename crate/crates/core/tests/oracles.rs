//! Frozen-value and cross-implementation oracles.
//!
//! Every closed-form quantity the library computes is checked here against
//! either an independently coded algorithm (breadth-first search, direct
//! summation) or a decimal constant computed ahead of time with arbitrary
//! precision arithmetic and frozen into this file.  A drift in any of the
//! fast paths shows up as a mismatch against these slow references.

use std::collections::HashMap;

use hcomp::compression::{
    asymptotic_compression, compute_profile, ProfileOptions, Strategy,
};
use hcomp::embeddings::{
    embed_tree, generator_step_bound, weighted_tree_closed_form, EmbeddingSpec, TreeTables,
};
use hcomp::kernels::{gaussian_kernel, schur_multiplier_analysis, SchurParams};
use hcomp::spaces::heisenberg::{self, LengthTable};
use hcomp::spaces::word::{words_of_length, ReducedWord};
use hcomp::spaces::{GroupSpec, DEFAULT_BALL_CAP};

/// Partial sums `sum_{j <= k} j^(1/2)` for the quarter-exponent weights,
/// frozen from a high-precision computation.
const SQRT_PARTIAL_SUMS: [f64; 8] = [
    1.0,
    2.414213562373095,
    4.1462643699419723,
    6.1462643699419723,
    8.382332347441762,
    10.83182209022494,
    13.477573401289531,
    16.306000526035721,
];

/// Squared compression values `rho(r)^2` of the quarter-exponent tree
/// embedding for `r = 8..=16`: the minimum over splits is attained by a
/// balanced pair of arms, so these equal `S(ceil(r/2)) + S(floor(r/2))`.
const BALANCED_ARM_VALUES: [f64; 9] = [
    12.292528739883945,
    14.528596717383734,
    16.764664694883524,
    19.214154437666702,
    21.66364418044988,
    24.309395491514471,
    26.955146802579061,
    29.783573927325252,
    32.612001052071442,
];

/// Least-squares slope of `ln rho` against `ln r` over `r = 8..=16` for
/// the quarter-exponent embedding.
const QUARTER_SLOPE_8_16: f64 = 0.703441188431;

/// `1 + sum_{j=2..=200} (j^(1/4) - (j-1)^(1/4))^2`: the squared step of a
/// single generator at word length 200.
const STEP_SUM_AT_200: f64 = 1.1151509065176;

/// Sphere-splitting constants for the radius-6 ball with `kappa = 1/4`,
/// hypothesis exponent `0.69`, cut radius 13.
const SPLIT_Q_BALL6: f64 = 0.9220576221211261;
const SPLIT_BOUND_BALL6: f64 = 3188649.119449852;

/// Same constants for the radius-3 ball with `kappa = 1`, exponent `0.1`,
/// cut radius 27.
const SPLIT_Q_BALL3: f64 = 0.9959135631036022;
const SPLIT_BOUND_BALL3: f64 = 15251194970191.203;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// Word distances computed through letter cancellation must agree with
/// genuine shortest paths in the generator graph.
#[test]
fn free_distances_match_breadth_first_search() {
    let mut points: Vec<ReducedWord> = Vec::new();
    for len in 0..=5usize {
        points.extend(words_of_length(2, len));
    }
    let index: HashMap<ReducedWord, usize> = points
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let gens: Vec<ReducedWord> = [1i16, -1, 2, -2]
        .iter()
        .map(|&l| ReducedWord::new(&[l]).unwrap())
        .collect();
    let neighbors: Vec<Vec<usize>> = points
        .iter()
        .map(|w| {
            gens.iter()
                .filter_map(|g| index.get(&w.mul(g)).copied())
                .collect()
        })
        .collect();
    for start in 0..points.len() {
        let mut dist = vec![u32::MAX; points.len()];
        dist[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &neighbors[v] {
                if dist[u] == u32::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        for other in 0..points.len() {
            let formula = points[start].distance(&points[other]);
            // The graph is restricted to the ball, so BFS distances can
            // only exceed the true ones when the geodesic leaves the
            // ball; that never happens in a tree.
            assert_eq!(
                dist[other], formula,
                "distance mismatch between {} and {}",
                points[start], points[other]
            );
        }
    }
}

/// The edge-weight partial sums of the tree tables against the frozen
/// decimals.
#[test]
fn edge_weight_sums_match_frozen_decimals() {
    let tables = TreeTables::new(0.25, 8).unwrap();
    for (k, &frozen) in SQRT_PARTIAL_SUMS.iter().enumerate() {
        let got = tables.closed_form(k + 1, 0, 0);
        assert!(
            (got - frozen).abs() < 1e-9,
            "arm sum at length {}: {got} vs {frozen}",
            k + 1
        );
    }
}

/// Closed-form pair distances against both the explicit sparse vectors
/// and a direct double summation coded independently here.
#[test]
fn closed_form_matches_sparse_vectors_and_direct_sums() {
    for &eps in &[0.0, 0.1, 0.25, 0.4] {
        let tables = TreeTables::new(eps, 8).unwrap();
        for ks in 0usize..=8 {
            for kt in 0..=ks {
                for p in 0..=kt {
                    if ks == p && kt == p && ks > 0 {
                        continue; // equal words, distance zero
                    }
                    let (s, t) = representative_pair(ks, kt, p);
                    assert_eq!(s.common_prefix_len(&t), p.min(kt));
                    let via_vectors = embed_tree(&s, eps).sub(&embed_tree(&t, eps)).norm2();
                    let via_tables = tables.closed_form(ks, kt, p);
                    let via_formula = weighted_tree_closed_form(ks, kt, p, eps).unwrap();
                    let direct = direct_double_sum(ks, kt, p, eps);
                    assert!(
                        (via_vectors - direct).abs() < 1e-9,
                        "vectors vs direct at ({ks},{kt},{p}), eps {eps}"
                    );
                    assert!(
                        (via_tables - direct).abs() < 1e-9,
                        "tables vs direct at ({ks},{kt},{p}), eps {eps}"
                    );
                    assert!(
                        (via_formula - direct).abs() < 1e-9,
                        "formula vs direct at ({ks},{kt},{p}), eps {eps}"
                    );
                }
            }
        }
    }
}

/// A reduced pair with prescribed lengths and common prefix length.
fn representative_pair(ks: usize, kt: usize, p: usize) -> (ReducedWord, ReducedWord) {
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
    (
        ReducedWord::new(&s).unwrap(),
        ReducedWord::new(&t).unwrap(),
    )
}

/// The pair distance written out as explicit sums of powers, with no
/// shared tables.
fn direct_double_sum(ks: usize, kt: usize, p: usize, eps: f64) -> f64 {
    let pw = |j: usize| (j as f64).powf(eps);
    let mut total = 0.0;
    for j in 1..=ks.saturating_sub(p) {
        total += pw(j) * pw(j);
    }
    for j in 1..=kt.saturating_sub(p) {
        total += pw(j) * pw(j);
    }
    for m in 1..=p {
        let d = pw(ks - m + 1) - pw(kt - m + 1);
        total += d * d;
    }
    total
}

/// Compression floor of the quarter-exponent embedding against the frozen
/// balanced-arm values, plus the frozen fit slope.
#[test]
fn quarter_exponent_profile_matches_frozen_floor() {
    let space = GroupSpec::free(2).build().unwrap();
    let spec = EmbeddingSpec::tree(0.25).unwrap();
    let profile = compute_profile(
        &space,
        &spec,
        16,
        &Strategy::TreeClosedForm,
        &ProfileOptions::default(),
    )
    .unwrap();
    for (i, &frozen) in BALANCED_ARM_VALUES.iter().enumerate() {
        let r = 8 + i as u32;
        let rho2 = profile.rho(r).unwrap().powi(2);
        assert!(
            rel_close(rho2, frozen, 1e-9),
            "rho({r})^2 = {rho2} vs frozen {frozen}"
        );
    }
    let est = asymptotic_compression(&profile, 8, 16).unwrap();
    assert!(
        (est.slope - QUARTER_SLOPE_8_16).abs() < 1e-8,
        "slope {} vs frozen {QUARTER_SLOPE_8_16}",
        est.slope
    );
}

/// Single-generator steps: the closed form at `(k, k-1, k-1)` must equal
/// the independent partial sum, stay below the analytic limit, and
/// increase with the word length.
#[test]
fn generator_steps_stay_under_the_analytic_limit() {
    let eps = 0.25f64;
    let limit = generator_step_bound(eps).unwrap();
    assert!((limit - 1.125).abs() < 1e-15);
    let mut running = 1.0f64;
    let mut last = 0.0f64;
    for k in 1usize..=200 {
        if k >= 2 {
            let d = (k as f64).powf(eps) - ((k - 1) as f64).powf(eps);
            running += d * d;
        }
        let closed = weighted_tree_closed_form(k, k - 1, k - 1, eps).unwrap();
        assert!(
            (closed - running).abs() < 1e-9,
            "step at length {k}: {closed} vs {running}"
        );
        assert!(closed < limit, "step at length {k} exceeds {limit}");
        assert!(closed > last, "steps must increase with length");
        last = closed;
    }
    assert!(
        (running - STEP_SUM_AT_200).abs() < 1e-9,
        "partial sum at 200: {running} vs {STEP_SUM_AT_200}"
    );
}

/// Central elements: lengths from the breadth-first table must match the
/// minimal-rectangle formula `2 min (p + q) over pq >= n`.
#[test]
fn central_lengths_match_minimal_rectangles() {
    let table = LengthTable::compute(heisenberg::DEFAULT_TABLE_RADIUS, DEFAULT_BALL_CAP).unwrap();
    assert_eq!(table.length(heisenberg::central()).unwrap(), 4);
    assert_eq!(table.length([1, 1, 1]).unwrap(), 2);
    assert_eq!(table.sphere_sizes()[1], 4);
    let lengths = table.central_lengths(12);
    assert_eq!(lengths.len(), 12);
    for &(n, len) in &lengths {
        let mut best = u32::MAX;
        for p in 1..=n {
            for q in 1..=n {
                if p * q >= n {
                    best = best.min(2 * (p + q) as u32);
                }
            }
        }
        assert_eq!(len, best, "central power {n}");
    }
}

/// Sphere sizes of the discrete nilpotent group, recomputed with an
/// independent search written inline.
#[test]
fn heisenberg_spheres_match_independent_search() {
    let table = LengthTable::compute(heisenberg::DEFAULT_TABLE_RADIUS, DEFAULT_BALL_CAP).unwrap();
    let mul = |a: [i64; 3], b: [i64; 3]| [a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1]];
    let gens = [[1i64, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]];
    let mut dist: HashMap<[i64; 3], u32> = HashMap::from([([0i64, 0, 0], 0)]);
    let mut frontier = vec![[0i64, 0, 0]];
    let mut sizes = vec![1u64];
    for n in 1..=6u32 {
        let mut next = Vec::new();
        for p in frontier {
            for g in gens {
                let q = mul(p, g);
                if !dist.contains_key(&q) {
                    dist.insert(q, n);
                    next.push(q);
                }
            }
        }
        sizes.push(next.len() as u64);
        frontier = next;
    }
    assert_eq!(&table.sphere_sizes()[..7], sizes.as_slice());
    for (p, &d) in &dist {
        assert_eq!(table.length(*p).unwrap(), d, "length of {p:?}");
    }
}

/// Sphere-splitting estimates against the frozen ratio and bound
/// decimals, on both parameterizations.
#[test]
fn sphere_splitting_bounds_match_frozen_decimals() {
    let space = GroupSpec::free(2).build().unwrap();
    let spec = EmbeddingSpec::tree(0.25).unwrap();

    let kernel6 = gaussian_kernel(&space, &spec, 6, 4.0, DEFAULT_BALL_CAP).unwrap();
    let a6 = schur_multiplier_analysis(
        &space,
        &kernel6,
        &SchurParams {
            eps: 0.69,
            r0: 13,
            m: 13,
        },
    )
    .unwrap();
    assert!(rel_close(a6.q, SPLIT_Q_BALL6, 1e-12), "q = {}", a6.q);
    assert!(
        rel_close(a6.norm_bound, SPLIT_BOUND_BALL6, 1e-12),
        "bound = {}",
        a6.norm_bound
    );

    let kernel3 = gaussian_kernel(&space, &spec, 3, 1.0, DEFAULT_BALL_CAP).unwrap();
    let a3 = schur_multiplier_analysis(
        &space,
        &kernel3,
        &SchurParams {
            eps: 0.1,
            r0: 3,
            m: 27,
        },
    )
    .unwrap();
    assert!(rel_close(a3.q, SPLIT_Q_BALL3, 1e-12), "q = {}", a3.q);
    assert!(
        rel_close(a3.norm_bound, SPLIT_BOUND_BALL3, 1e-12),
        "bound = {}",
        a3.norm_bound
    );
}

/// Pair bookkeeping of the class-enumeration strategy: the total over a
/// radius-8 ball must equal the binomial count of its 13,121 points.
#[test]
fn class_enumeration_accounts_for_every_pair() {
    let space = GroupSpec::free(2).build().unwrap();
    let spec = EmbeddingSpec::tree(0.25).unwrap();
    let profile = compute_profile(
        &space,
        &spec,
        16,
        &Strategy::TreeClosedForm,
        &ProfileOptions::default(),
    )
    .unwrap();
    assert_eq!(space.ball_size(8), Some(13_121));
    assert_eq!(profile.pairs_total(), 13_121 * 13_120 / 2);
}

/// The plain tree embedding must reproduce word distances themselves:
/// squared image distances are exactly the integer distances.
#[test]
fn unweighted_tree_reproduces_word_distances() {
    for len_s in 0..=4usize {
        for s in words_of_length(2, len_s) {
            for len_t in 0..=4usize {
                for t in words_of_length(2, len_t) {
                    let diff2 = embed_tree(&s, 0.0).sub(&embed_tree(&t, 0.0)).norm2();
                    let want = s.distance(&t) as f64;
                    assert_eq!(diff2, want, "pair {s}, {t}");
                }
            }
        }
    }
}
