//! Coarse-geometry checks on sampled maps.
//!
//! A sampled map is a pair of distance matrices over the same index set:
//! distances in the domain and distances between the image points.  All
//! the structure the checks need (uniform-embedding moduli, Lipschitz
//! constants, quasi-isometry fits) is a function of those two matrices,
//! so samples work the same for group balls, point clouds, and sequences.

use crate::report::{CheckReport, Verdict};
use crate::{Error, Result};

/// Paired domain and image distance matrices over one index set.
#[derive(Clone, Debug)]
pub struct MapSample {
    pub name: String,
    dom: Vec<Vec<f64>>,
    img: Vec<Vec<f64>>,
}

fn validate_matrix(m: &[Vec<f64>]) -> Result<()> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Domain(format!(
                "row {i} has {} entries in a {n}-point matrix",
                row.len()
            )));
        }
        if m[i][i] != 0.0 {
            return Err(Error::Domain(format!("nonzero diagonal at {i}")));
        }
        for (j, &v) in row.iter().enumerate() {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("bad distance {v} at ({i}, {j})")));
            }
            if (v - m[j][i]).abs() > 1e-9 * (1.0 + v.abs()) {
                return Err(Error::Domain(format!("asymmetric entry at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

impl MapSample {
    pub fn new(name: impl Into<String>, dom: Vec<Vec<f64>>, img: Vec<Vec<f64>>) -> Result<Self> {
        if dom.len() != img.len() {
            return Err(Error::Domain(format!(
                "domain has {} points, image has {}",
                dom.len(),
                img.len()
            )));
        }
        validate_matrix(&dom)?;
        validate_matrix(&img)?;
        Ok(Self {
            name: name.into(),
            dom,
            img,
        })
    }

    /// Builds a sample from explicit coordinates under two maps.
    pub fn from_points<T>(
        name: impl Into<String>,
        points: &[T],
        dom_dist: impl Fn(&T, &T) -> f64,
        img_dist: impl Fn(&T, &T) -> f64,
    ) -> Result<Self> {
        let n = points.len();
        let mut dom = vec![vec![0.0; n]; n];
        let mut img = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = dom_dist(&points[i], &points[j]);
                let e = img_dist(&points[i], &points[j]);
                dom[i][j] = d;
                dom[j][i] = d;
                img[i][j] = e;
                img[j][i] = e;
            }
        }
        Self::new(name, dom, img)
    }

    pub fn len(&self) -> usize {
        self.dom.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dom.is_empty()
    }

    pub fn dom(&self, i: usize, j: usize) -> f64 {
        self.dom[i][j]
    }

    pub fn img(&self, i: usize, j: usize) -> f64 {
        self.img[i][j]
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| {
            ((i + 1)..n).map(move |j| (i, j, self.dom[i][j], self.img[i][j]))
        })
    }

    pub fn dom_max(&self) -> f64 {
        self.pairs().map(|(_, _, d, _)| d).fold(0.0, f64::max)
    }
}

/// Share of the upper domain range over which the lower envelope may stay
/// flat before the uniform-embedding verdict flips to Fail.
const PLATEAU_SHARE: f64 = 0.5;

/// Checks for two-sided moduli on the sampled window.
///
/// The upper modulus always exists on finite data; the decision rests on
/// the lower one.  The check buckets pairs by domain distance, forms the
/// monotone lower envelope `rho_minus(r) = min { d_img : d_dom >= r }`,
/// and fails when the envelope stops growing over the upper half of the
/// window, which is the sampled signature of pairs that stay close in the
/// image while drifting apart in the domain.
pub fn check_uniform_embedding(sample: &MapSample) -> CheckReport {
    let mut report = CheckReport::new("uniform-embedding", Verdict::Pass);
    let max_dom = sample.dom_max();
    if sample.len() < 3 || max_dom <= 0.0 {
        report.verdict = Verdict::Inconclusive;
        return report.with_detail("too few distinct points to assess moduli");
    }
    let buckets = max_dom.floor() as usize + 1;
    let mut min_img = vec![f64::INFINITY; buckets];
    let mut max_img = vec![f64::NEG_INFINITY; buckets];
    for (_, _, d, e) in sample.pairs() {
        let b = d.floor() as usize;
        min_img[b] = min_img[b].min(e);
        max_img[b] = max_img[b].max(e);
    }
    // Monotone lower envelope over "distance at least r".
    let mut envelope = vec![f64::INFINITY; buckets];
    let mut run = f64::INFINITY;
    for b in (0..buckets).rev() {
        run = run.min(min_img[b]);
        envelope[b] = run;
    }
    let lo = envelope[0];
    let hi = envelope
        .iter()
        .rev()
        .find(|v| v.is_finite())
        .copied()
        .unwrap_or(lo);
    // Last bucket where the envelope still increased.
    let mut last_rise = 0usize;
    for b in 1..buckets {
        if envelope[b].is_finite() && envelope[b] > envelope[b - 1] + 1e-12 {
            last_rise = b;
        }
    }
    let plateau = (buckets - 1 - last_rise) as f64 / (buckets as f64).max(1.0);
    if plateau > PLATEAU_SHARE {
        report.verdict = Verdict::Fail;
        report = report.with_detail(format!(
            "lower modulus stalled at {hi:.6} from domain distance {last_rise} \
             onward ({:.0}% of the window)",
            plateau * 100.0
        ));
    }
    let max_upper = max_img.iter().cloned().fold(0.0f64, f64::max);
    report
        .with_constant("rho_minus_first", lo)
        .with_constant("rho_minus_last", hi)
        .with_constant("rho_plus_last", max_upper)
        .with_constant("plateau_share", plateau)
        .with_range(0.0, max_dom)
}

/// Largest ratio of image to domain distance over distinct pairs.
/// Unbounded growth of this constant across nested samples is the
/// sampled signature of a map that is not Lipschitz.
pub fn pointwise_lipschitz_constant(sample: &MapSample) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (_, _, d, e) in sample.pairs() {
        if d > 0.0 {
            let c = e / d;
            best = Some(best.map_or(c, |b: f64| b.max(c)));
        }
    }
    best
}

/// Verifies `d_img <= c d_dom + d` over every sampled pair.
pub fn check_large_scale_lipschitz(sample: &MapSample, c: f64, d: f64) -> CheckReport {
    let mut report = CheckReport::new("large-scale-lipschitz", Verdict::Pass);
    let mut worst = f64::NEG_INFINITY;
    for (i, j, dd, e) in sample.pairs() {
        let slack = e - (c * dd + d);
        if slack > worst {
            worst = slack;
        }
        if slack > 1e-9 {
            report.verdict = Verdict::Fail;
            if report.details.len() < 4 {
                report = report.with_detail(format!(
                    "pair ({i}, {j}): image {e:.6} exceeds {c} * {dd:.6} + {d}"
                ));
            }
        }
    }
    report
        .with_constant("c", c)
        .with_constant("d", d)
        .with_constant("worst_slack", worst)
        .with_range(0.0, sample.dom_max())
}

/// Fits an affine upper bound from the sample: the slope comes from the
/// far half of the window, the offset then covers everything.
pub fn fit_large_scale_lipschitz(sample: &MapSample) -> Result<(f64, f64)> {
    let far = sample.dom_max() / 2.0;
    let mut c = 0.0f64;
    let mut seen = false;
    for (_, _, d, e) in sample.pairs() {
        if d >= far && d > 0.0 {
            c = c.max(e / d);
            seen = true;
        }
    }
    if !seen {
        return Err(Error::Estimation(
            "no pairs in the far half of the window".into(),
        ));
    }
    let mut offset = 0.0f64;
    for (_, _, d, e) in sample.pairs() {
        offset = offset.max(e - c * d);
    }
    Ok((c, offset))
}

/// Translates a large-scale Lipschitz bound through a quasi-geodesic
/// parameterization: moving `t` along the chain moves at most
/// `rho_plus(3 delta / 2)` per subchain step, and steps cover `delta / 2`
/// of parameter each.
pub fn lslip_from_rho_plus(
    rho_plus: impl Fn(f64) -> f64,
    lambda: f64,
    delta: f64,
) -> Result<(f64, f64)> {
    if !(lambda >= 1.0) || !(delta > 0.0) {
        return Err(Error::Config(format!(
            "need lambda >= 1 and delta > 0, got ({lambda}, {delta})"
        )));
    }
    let c = 2.0 * lambda * rho_plus(1.5 * delta) / delta;
    let d = rho_plus(0.5 * delta);
    Ok((c, d))
}

/// Upgrades coarse constants to quasi-isometry constants along geodesic
/// windows: `(c, d)` large-scale Lipschitz data over `(lambda, delta)`
/// chains yields additive constant `delta' = 3 delta c / 2 + d` and
/// multiplicative constant `lambda' = 2 c (d + delta') lambda / delta + 1`.
pub fn coarse_to_qi_constants(c: f64, d: f64, lambda: f64, delta: f64) -> Result<(f64, f64)> {
    if !(lambda >= 1.0) || !(delta > 0.0) || !(c > 0.0) || !(d >= 0.0) {
        return Err(Error::Config(format!(
            "bad constants (c={c}, d={d}, lambda={lambda}, delta={delta})"
        )));
    }
    let delta_prime = 1.5 * delta * c + d;
    let lambda_prime = 2.0 * c * (d + delta_prime) * lambda / delta + 1.0;
    Ok((delta_prime, lambda_prime))
}

/// A subchain extracted by the greedy gap rule.
#[derive(Clone, Debug)]
pub struct Subchain {
    /// Indices of the retained chain points, starting at 0.
    pub indices: Vec<usize>,
    /// Leftover arc beyond the last retained point, below `delta / 2`.
    pub terminal_gap: f64,
    /// Number of selected steps, `indices.len() - 1`.
    pub m: usize,
}

/// Greedily thins a chain given its consecutive step lengths: walk
/// forward and cut as soon as the accumulated arc reaches `delta / 2`.
/// With steps no longer than `delta`, every selected gap lands in
/// `[delta / 2, 3 delta / 2)` and the leftover stays below `delta / 2`.
pub fn extract_subchain(steps: &[f64], delta: f64) -> Result<Subchain> {
    if !(delta > 0.0) {
        return Err(Error::Config(format!("delta must be positive, got {delta}")));
    }
    let mut total = 0.0f64;
    for (i, &s) in steps.iter().enumerate() {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::Domain(format!("bad step {s} at {i}")));
        }
        if s > delta {
            return Err(Error::Domain(format!(
                "step {i} has length {s}, above delta = {delta}; refine the chain"
            )));
        }
        total += s;
    }
    let mut indices = vec![0usize];
    let mut acc = 0.0f64;
    for (i, &s) in steps.iter().enumerate() {
        acc += s;
        if acc >= delta / 2.0 {
            indices.push(i + 1);
            acc = 0.0;
        }
    }
    let m = indices.len() - 1;
    // Each selected gap is at least delta / 2, so m * delta / 2 <= total.
    debug_assert!(m as f64 <= 2.0 * total / delta + 1e-9);
    Ok(Subchain {
        indices,
        terminal_gap: acc,
        m,
    })
}

/// Checks the two-sided chain condition for a parameterized sequence:
/// `(1 / lambda) |i - j| - delta <= d(x_i, x_j) <= lambda |i - j| + delta`
/// where the sample's domain metric is the parameter distance.
pub fn check_quasi_geodesic_chain(sample: &MapSample, lambda: f64, delta: f64) -> CheckReport {
    let mut report = CheckReport::new("quasi-geodesic-chain", Verdict::Pass);
    if !(lambda >= 1.0) || !(delta >= 0.0) {
        report.verdict = Verdict::Inconclusive;
        return report.with_detail(format!("bad constants ({lambda}, {delta})"));
    }
    for (i, j, t, e) in sample.pairs() {
        let lower = t / lambda - delta;
        let upper = lambda * t + delta;
        if e < lower - 1e-9 || e > upper + 1e-9 {
            report.verdict = Verdict::Fail;
            if report.details.len() < 4 {
                report = report.with_detail(format!(
                    "indices ({i}, {j}): distance {e:.6} outside \
                     [{lower:.6}, {upper:.6}] for parameter gap {t:.6}"
                ));
            }
        }
    }
    report
        .with_constant("lambda", lambda)
        .with_constant("delta", delta)
        .with_range(0.0, sample.dom_max())
}

/// Checks whether a point set is quasi-geodesic inside its ambient space:
/// pairs must be joined by chains through the set with steps at most
/// `delta` and total length at most `lambda d + delta`.  Chain lengths
/// are shortest paths in the graph whose edges are pairs within `delta`.
pub fn check_quasi_geodesic_subset(dist: &[Vec<f64>], lambda: f64, delta: f64) -> Result<CheckReport> {
    validate_matrix(dist)?;
    let n = dist.len();
    let mut report = CheckReport::new("quasi-geodesic-subset", Verdict::Pass);
    if n < 2 {
        report.verdict = Verdict::Inconclusive;
        return Ok(report.with_detail("need at least two points"));
    }
    // Dijkstra from each source over the delta-edge graph.
    let mut unreachable = 0u64;
    let mut worst: Option<(usize, usize, f64, f64)> = None;
    for src in 0..n {
        let mut best = vec![f64::INFINITY; n];
        best[src] = 0.0;
        let mut done = vec![false; n];
        for _ in 0..n {
            let mut u = None;
            let mut ud = f64::INFINITY;
            for v in 0..n {
                if !done[v] && best[v] < ud {
                    ud = best[v];
                    u = Some(v);
                }
            }
            let Some(u) = u else { break };
            done[u] = true;
            for v in 0..n {
                if dist[u][v] <= delta && best[u] + dist[u][v] < best[v] {
                    best[v] = best[u] + dist[u][v];
                }
            }
        }
        for dst in (src + 1)..n {
            if !best[dst].is_finite() {
                unreachable += 1;
                continue;
            }
            let allowed = lambda * dist[src][dst] + delta;
            let excess = best[dst] - allowed;
            if excess > 1e-9 && worst.map_or(true, |(_, _, _, w)| excess > w) {
                worst = Some((src, dst, best[dst], excess));
            }
        }
    }
    if unreachable > 0 {
        report.verdict = Verdict::Fail;
        report = report.with_detail(format!(
            "{unreachable} pairs cannot be joined by steps of length <= {delta}"
        ));
    }
    if let Some((i, j, chain, excess)) = worst {
        report.verdict = Verdict::Fail;
        report = report.with_detail(format!(
            "pair ({i}, {j}): shortest chain {chain:.6} exceeds \
             lambda d + delta by {excess:.6} (d = {:.6})",
            dist[i][j]
        ));
    }
    Ok(report
        .with_constant("lambda", lambda)
        .with_constant("delta", delta))
}

/// A fitted quasi-isometry constant pair.
#[derive(Clone, Copy, Debug)]
pub struct QiFit {
    pub c: f64,
    pub d: f64,
}

/// Scans multiplicative constants over the grid `2^(k/16)` and takes the
/// first one whose forced additive constant
/// `D(c) = max(d_img - c d_dom, d_dom / c - d_img, 0)` stays within
/// `d_cap`.  With the default near-zero cap this recovers exact scale
/// factors; a generous cap fits rough equivalences.
pub fn fit_quasi_isometry(sample: &MapSample, d_cap: f64) -> Result<QiFit> {
    let mut best: Option<QiFit> = None;
    for k in 0..=256u32 {
        let c = 2f64.powf(k as f64 / 16.0);
        let mut need = 0.0f64;
        for (_, _, dd, e) in sample.pairs() {
            need = need.max(e - c * dd).max(dd / c - e);
        }
        if need <= d_cap {
            best = Some(QiFit { c, d: need });
            break;
        }
    }
    best.ok_or_else(|| {
        Error::Estimation(format!(
            "no multiplicative constant up to 2^16 brings the additive \
             constant within {d_cap}"
        ))
    })
}

/// Full quasi-isometry check: fit constants, then restate the verdict as
/// a report with the witnesses already folded into the fit.
pub fn check_quasi_isometry(sample: &MapSample, d_cap: f64) -> CheckReport {
    match fit_quasi_isometry(sample, d_cap) {
        Ok(fit) => CheckReport::new("quasi-isometry", Verdict::Pass)
            .with_constant("c", fit.c)
            .with_constant("d", fit.d)
            .with_detail(format!(
                "every pair satisfies d_dom / {c:.6} - {d:.6} <= d_img <= \
                 {c:.6} d_dom + {d:.6}",
                c = fit.c,
                d = fit.d
            ))
            .with_range(0.0, sample.dom_max()),
        Err(e) => CheckReport::new("quasi-isometry", Verdict::Fail)
            .with_detail(e.to_string())
            .with_range(0.0, sample.dom_max()),
    }
}
