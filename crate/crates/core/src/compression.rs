//! Compression profiles: how strongly an embedding spreads a space out.
//!
//! For an embedding `f` the quantities of interest at each radius `r` are
//!
//! * `rho(r)`:  the smallest image distance over pairs with `d(x,y) >= r`,
//! * `rho_star(r)`: the smallest image distance over pairs with
//!   `d(x,y) == r` (no monotone envelope),
//! * `rho_plus(r)`: the largest image distance over pairs with
//!   `d(x,y) <= r` (the expansion modulus),
//! * `pairs(r)`: how many pairs realized distance `r`.
//!
//! All quantities are computed over a finite window: pairs of points in the
//! ball of radius `ceil(r_max / 2)` around the basepoint.  For the spaces
//! and embeddings here the minimizers at each distance are balanced pairs
//! that fit inside that ball, so `rho` agrees with the global infimum on the
//! reported range; `rho_plus` is window-relative and grows with the window
//! for embeddings with unbounded weights.
//!
//! Real-valued metrics are bucketed conservatively: a pair enters the
//! `rho`/`rho_star` bucket `floor(d)` (so it stays eligible for every
//! `r <= d`) and the `rho_plus` bucket `ceil(d)` (so it is only charged
//! once `r >= d`).

use std::fmt;
use std::io::Write as IoWrite;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::embeddings::{embed, EmbeddingSpec, HilbertVector, TreeTables};
use crate::report::{CheckReport, Verdict};
use crate::spaces::{GroupSpec, Space};
use crate::{Error, Result};

/// Default number of pairs a profile computation may examine.
pub const DEFAULT_PAIR_CAP: u64 = 120_000_000;

/// Default number of sampled pairs.
pub const DEFAULT_SAMPLE_PAIRS: u64 = 1_000_000;

/// How a profile enumerates pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Embed every ball point and walk all pairs.
    ExactPairwise,
    /// Free-group tree embeddings only: enumerate (length, length, prefix)
    /// classes with multiplicities instead of individual pairs.
    TreeClosedForm,
    /// Product spaces with direct-sum embeddings: per-factor extrema
    /// convolved over distance splittings.  Pairs are drawn from the box
    /// product of factor balls.
    Factored,
    /// Uniform random pairs from the ball, reproducible by seed.
    Sampled { seed: u64, pairs: u64 },
}

impl Strategy {
    pub fn parse(text: &str) -> Result<Self> {
        let (head, params) = match text.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (text, None),
        };
        let reject_params = |name: &str| -> Result<()> {
            match params {
                Some(_) => Err(Error::Config(format!("{name} takes no parameters"))),
                None => Ok(()),
            }
        };
        match head {
            "exact" => {
                reject_params("exact")?;
                Ok(Strategy::ExactPairwise)
            }
            "closed-form" => {
                reject_params("closed-form")?;
                Ok(Strategy::TreeClosedForm)
            }
            "factored" => {
                reject_params("factored")?;
                Ok(Strategy::Factored)
            }
            "sampled" => {
                let mut seed = 1u64;
                let mut pairs = DEFAULT_SAMPLE_PAIRS;
                if let Some(params) = params {
                    for kv in params.split(':') {
                        match kv.split_once('=') {
                            Some(("seed", v)) => {
                                seed = v.parse().map_err(|_| {
                                    Error::Config(format!("bad seed {v:?}"))
                                })?;
                            }
                            Some(("pairs", v)) => {
                                pairs = v.parse().map_err(|_| {
                                    Error::Config(format!("bad pair count {v:?}"))
                                })?;
                            }
                            _ => {
                                return Err(Error::Config(format!(
                                    "unknown sampled parameter {kv:?}"
                                )))
                            }
                        }
                    }
                }
                Ok(Strategy::Sampled { seed, pairs })
            }
            other => Err(Error::Config(format!("unknown strategy {other:?}"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::ExactPairwise => write!(f, "exact"),
            Strategy::TreeClosedForm => write!(f, "closed-form"),
            Strategy::Factored => write!(f, "factored"),
            Strategy::Sampled { seed, pairs } => {
                write!(f, "sampled:seed={seed}:pairs={pairs}")
            }
        }
    }
}

/// Tuning knobs for profile computations.
#[derive(Clone, Copy, Debug)]
pub struct ProfileOptions {
    /// Cap on ball sizes enumerated along the way.
    pub ball_cap: u64,
    /// Cap on the number of pairs an exact enumeration may touch.
    pub pair_cap: u64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            ball_cap: crate::spaces::DEFAULT_BALL_CAP,
            pair_cap: DEFAULT_PAIR_CAP,
        }
    }
}

/// One radius of a profile.  Empty buckets carry NaN (and zero pairs).
#[derive(Clone, Copy, Debug)]
pub struct ProfileRow {
    pub r: u32,
    pub rho: f64,
    pub rho_star: f64,
    pub rho_plus: f64,
    pub pairs: u64,
}

/// Distance histogram extrema, bucketed by integer radius.
#[derive(Clone, Debug, Default)]
pub struct ProfileAccumulator {
    min_by_floor: Vec<f64>,
    max_by_ceil: Vec<f64>,
    count_by_floor: Vec<u64>,
}

impl ProfileAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    fn grow(&mut self, bucket: usize) {
        if bucket >= self.min_by_floor.len() {
            self.min_by_floor.resize(bucket + 1, f64::INFINITY);
            self.max_by_ceil.resize(bucket + 1, f64::NEG_INFINITY);
            self.count_by_floor.resize(bucket + 1, 0);
        }
    }

    /// Records one pair at distance `d` with image distance `img`.
    pub fn record_pair(&mut self, d: f64, img: f64) {
        self.record_class(d, img, img, 1);
    }

    /// Records a whole class of `count` pairs sharing distance `d`, whose
    /// image distances range over `[min_img, max_img]`.
    pub fn record_class(&mut self, d: f64, min_img: f64, max_img: f64, count: u64) {
        debug_assert!(d.is_finite() && d >= 0.0);
        let fb = d.floor() as usize;
        let cb = d.ceil() as usize;
        self.grow(cb.max(fb));
        if min_img < self.min_by_floor[fb] {
            self.min_by_floor[fb] = min_img;
        }
        if max_img > self.max_by_ceil[cb] {
            self.max_by_ceil[cb] = max_img;
        }
        self.count_by_floor[fb] = self.count_by_floor[fb].saturating_add(count);
    }

    pub fn merge(&mut self, other: Self) {
        self.grow(other.min_by_floor.len().saturating_sub(1));
        for (b, v) in other.min_by_floor.iter().enumerate() {
            if *v < self.min_by_floor[b] {
                self.min_by_floor[b] = *v;
            }
        }
        for (b, v) in other.max_by_ceil.iter().enumerate() {
            if *v > self.max_by_ceil[b] {
                self.max_by_ceil[b] = *v;
            }
        }
        for (b, v) in other.count_by_floor.iter().enumerate() {
            self.count_by_floor[b] = self.count_by_floor[b].saturating_add(*v);
        }
    }

    /// Collapses buckets into rows `1..=r_max`.
    pub fn finish(&self, r_max: u32, strategy: String) -> CompressionProfile {
        let len = self.min_by_floor.len();
        // Suffix minima make rho monotone: min over all buckets >= r.
        let mut suffix = vec![f64::INFINITY; len + 1];
        for b in (0..len).rev() {
            suffix[b] = self.min_by_floor[b].min(suffix[b + 1]);
        }
        let mut rows = Vec::with_capacity(r_max as usize);
        let mut running_max = f64::NEG_INFINITY;
        for b in 0..=(r_max as usize) {
            if b < len {
                running_max = running_max.max(self.max_by_ceil[b]);
            }
            if b == 0 {
                continue;
            }
            let rho = if b < len && suffix[b].is_finite() {
                suffix[b]
            } else {
                f64::NAN
            };
            let rho_star = if b < len && self.min_by_floor[b].is_finite() {
                self.min_by_floor[b]
            } else {
                f64::NAN
            };
            let rho_plus = if running_max > f64::NEG_INFINITY {
                running_max
            } else {
                f64::NAN
            };
            let pairs = if b < len { self.count_by_floor[b] } else { 0 };
            rows.push(ProfileRow {
                r: b as u32,
                rho,
                rho_star,
                rho_plus,
                pairs,
            });
        }
        CompressionProfile { rows, strategy }
    }
}

/// A computed profile with the strategy that produced it.
#[derive(Clone, Debug)]
pub struct CompressionProfile {
    rows: Vec<ProfileRow>,
    strategy: String,
}

impl CompressionProfile {
    pub fn from_rows(rows: Vec<ProfileRow>, strategy: String) -> Self {
        Self { rows, strategy }
    }

    pub fn rows(&self) -> &[ProfileRow] {
        &self.rows
    }

    pub fn strategy(&self) -> &str {
        &self.strategy
    }

    pub fn r_max(&self) -> u32 {
        self.rows.last().map_or(0, |row| row.r)
    }

    pub fn pairs_total(&self) -> u64 {
        self.rows.iter().map(|row| row.pairs).sum()
    }

    fn row(&self, r: u32) -> Option<&ProfileRow> {
        if r == 0 || r > self.r_max() {
            return None;
        }
        self.rows.get(r as usize - 1)
    }

    /// `rho(r)`, or None when no pair at distance `>= r` was seen.
    pub fn rho(&self, r: u32) -> Option<f64> {
        self.row(r).map(|row| row.rho).filter(|v| v.is_finite())
    }

    pub fn rho_star(&self, r: u32) -> Option<f64> {
        self.row(r)
            .map(|row| row.rho_star)
            .filter(|v| v.is_finite())
    }

    pub fn rho_plus(&self, r: u32) -> Option<f64> {
        self.row(r)
            .map(|row| row.rho_plus)
            .filter(|v| v.is_finite())
    }

    /// Writes `r,rho,rho_star,rho_plus,pairs` with a header line.
    pub fn write_csv(&self, mut out: impl IoWrite) -> std::io::Result<()> {
        writeln!(out, "r,rho,rho_star,rho_plus,pairs")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{}",
                row.r,
                fmt_value(row.rho),
                fmt_value(row.rho_star),
                fmt_value(row.rho_plus),
                row.pairs
            )?;
        }
        Ok(())
    }
}

fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.12}")
    }
}

/// Ball radius needed so that pairs can realize distances up to `r_max`.
fn window_radius(r_max: u32) -> u32 {
    r_max.div_ceil(2)
}

/// Computes a profile of `spec` over `space` for radii `1..=r_max`.
pub fn compute_profile(
    space: &Space,
    spec: &EmbeddingSpec,
    r_max: u32,
    strategy: &Strategy,
    opts: &ProfileOptions,
) -> Result<CompressionProfile> {
    if r_max == 0 {
        return Err(Error::Config("profile radius must be positive".into()));
    }
    let acc = match strategy {
        Strategy::ExactPairwise => exact_accumulate(space, spec, r_max, opts)?,
        Strategy::TreeClosedForm => closed_form_accumulate(space, spec, r_max)?,
        Strategy::Factored => factored_accumulate(space, spec, r_max, opts)?,
        Strategy::Sampled { seed, pairs } => {
            sampled_accumulate(space, spec, r_max, *seed, *pairs, opts)?
        }
    };
    Ok(acc.finish(r_max, strategy.to_string()))
}

fn embed_ball(
    space: &Space,
    spec: &EmbeddingSpec,
    radius: u32,
    ball_cap: u64,
) -> Result<(Vec<crate::spaces::Point>, Vec<HilbertVector>)> {
    let ball = space.ball(radius, ball_cap)?;
    let mut vectors = Vec::with_capacity(ball.points.len());
    for p in &ball.points {
        vectors.push(embed(spec, p)?);
    }
    Ok((ball.points, vectors))
}

fn exact_accumulate(
    space: &Space,
    spec: &EmbeddingSpec,
    r_max: u32,
    opts: &ProfileOptions,
) -> Result<ProfileAccumulator> {
    let radius = window_radius(r_max);
    let (points, vectors) = embed_ball(space, spec, radius, opts.ball_cap)?;
    let n = points.len();
    let predicted = (n as u64) * (n as u64 - 1) / 2;
    if predicted > opts.pair_cap {
        return Err(Error::Capacity {
            predicted,
            cap: opts.pair_cap,
        });
    }
    let acc = (0..n)
        .into_par_iter()
        .fold(ProfileAccumulator::new, |mut acc, i| {
            for j in (i + 1)..n {
                let d = space
                    .distance(&points[i], &points[j])
                    .expect("ball points share the space kind");
                let img = vectors[i].sub(&vectors[j]).norm();
                acc.record_pair(d, img);
            }
            acc
        })
        .reduce(ProfileAccumulator::new, |mut a, b| {
            a.merge(b);
            a
        });
    Ok(acc)
}

/// Number of reduced words of length `len` over rank `rank`.
fn free_word_count(rank: usize, len: usize) -> f64 {
    if len == 0 {
        1.0
    } else {
        2.0 * rank as f64 * (2.0 * rank as f64 - 1.0).powi(len as i32 - 1)
    }
}

fn closed_form_accumulate(
    space: &Space,
    spec: &EmbeddingSpec,
    r_max: u32,
) -> Result<ProfileAccumulator> {
    let rank = match space.spec() {
        GroupSpec::Free { rank } => *rank,
        _ => {
            return Err(Error::Config(
                "closed-form strategy needs a free group".into(),
            ))
        }
    };
    let eps = match spec {
        EmbeddingSpec::Tree { eps } => *eps,
        _ => {
            return Err(Error::Config(
                "closed-form strategy needs a tree embedding".into(),
            ))
        }
    };
    let radius = window_radius(r_max) as usize;
    let tables = TreeTables::new(eps, radius)?;
    let q = 2.0 * rank as f64 - 1.0;
    let mut acc = ProfileAccumulator::new();
    // Unordered pairs grouped by (|s|, |t|, common prefix length), |s| >= |t|.
    for ks in 0..=radius {
        for kt in 0..=ks {
            for p in 0..=kt {
                if ks == kt && p == ks {
                    continue; // identical words
                }
                let d = (ks + kt - 2 * p) as f64;
                let img = tables.closed_form(ks, kt, p).max(0.0).sqrt();
                let prefixes = free_word_count(rank, p);
                // Admissible next letters after a nonempty reduced prefix.
                let fresh = if p == 0 { q + 1.0 } else { q };
                let count = if p == kt {
                    // t is a proper prefix of s.
                    prefixes * fresh * q.powi((ks - p) as i32 - 1)
                } else if ks == kt {
                    // Equal lengths, diverging tails: unordered choice of
                    // the two distinct branch letters.
                    prefixes * fresh * (fresh - 1.0) / 2.0
                        * q.powi((ks - p) as i32 - 1)
                        * q.powi((kt - p) as i32 - 1)
                } else {
                    // Distinct lengths fix the roles, so branch letters are
                    // an ordered pair.
                    prefixes * fresh * q.powi((ks - p) as i32 - 1)
                        * (fresh - 1.0)
                        * q.powi((kt - p) as i32 - 1)
                };
                debug_assert!(count >= 1.0 && count < 1.8e19);
                acc.record_class(d, img, img, count as u64);
            }
        }
    }
    Ok(acc)
}

/// Per-distance image extrema of one factor, over ordered pairs of its
/// ball (including identical pairs at distance zero).
struct FactorExtrema {
    min2: Vec<f64>,
    max2: Vec<f64>,
    count: Vec<u128>,
}

fn factor_extrema(
    space: &Space,
    spec: &EmbeddingSpec,
    radius: u32,
    opts: &ProfileOptions,
) -> Result<FactorExtrema> {
    let (points, vectors) = embed_ball(space, spec, radius, opts.ball_cap)?;
    let n = points.len();
    let predicted = (n as u64) * (n as u64 - 1) / 2;
    if predicted > opts.pair_cap {
        return Err(Error::Capacity {
            predicted,
            cap: opts.pair_cap,
        });
    }
    let len = 2 * radius as usize + 1;
    let mut ex = FactorExtrema {
        min2: vec![f64::INFINITY; len],
        max2: vec![f64::NEG_INFINITY; len],
        count: vec![0u128; len],
    };
    ex.min2[0] = 0.0;
    ex.max2[0] = 0.0;
    ex.count[0] = n as u128;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = space.distance(&points[i], &points[j])?;
            let b = d.round() as usize;
            debug_assert!((d - b as f64).abs() < 1e-9, "factor metrics are integral");
            let img2 = vectors[i].sub(&vectors[j]).norm2();
            if img2 < ex.min2[b] {
                ex.min2[b] = img2;
            }
            if img2 > ex.max2[b] {
                ex.max2[b] = img2;
            }
            ex.count[b] += 2; // both orderings
        }
    }
    Ok(ex)
}

fn factored_accumulate(
    space: &Space,
    spec: &EmbeddingSpec,
    r_max: u32,
    opts: &ProfileOptions,
) -> Result<ProfileAccumulator> {
    let factors = match space.spec() {
        GroupSpec::Product(factors) => factors,
        _ => {
            return Err(Error::Config(
                "factored strategy needs a product space".into(),
            ))
        }
    };
    let parts = match spec {
        EmbeddingSpec::DirectSum(parts) => parts,
        _ => {
            return Err(Error::Config(
                "factored strategy needs a direct-sum embedding".into(),
            ))
        }
    };
    if factors.len() != parts.len() {
        return Err(Error::Config(format!(
            "product has {} factors but the direct sum has {} summands",
            factors.len(),
            parts.len()
        )));
    }
    let radius = window_radius(r_max);
    let mut combined: Option<FactorExtrema> = None;
    for (fspec, part) in factors.iter().zip(parts) {
        let fspace = fspec.build()?;
        let ex = factor_extrema(&fspace, part, radius, opts)?;
        combined = Some(match combined {
            None => ex,
            Some(left) => convolve_extrema(&left, &ex),
        });
    }
    let combined = combined.expect("products have at least two factors");
    let mut acc = ProfileAccumulator::new();
    for (d, &count) in combined.count.iter().enumerate().skip(1) {
        if count == 0 {
            continue;
        }
        let unordered = (count / 2).min(u64::MAX as u128) as u64;
        acc.record_class(
            d as f64,
            combined.min2[d].max(0.0).sqrt(),
            combined.max2[d].max(0.0).sqrt(),
            unordered,
        );
    }
    Ok(acc)
}

fn convolve_extrema(a: &FactorExtrema, b: &FactorExtrema) -> FactorExtrema {
    let len = a.count.len() + b.count.len() - 1;
    let mut out = FactorExtrema {
        min2: vec![f64::INFINITY; len],
        max2: vec![f64::NEG_INFINITY; len],
        count: vec![0u128; len],
    };
    for (da, &ca) in a.count.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (db, &cb) in b.count.iter().enumerate() {
            if cb == 0 {
                continue;
            }
            let d = da + db;
            out.count[d] = out.count[d].saturating_add(ca.saturating_mul(cb));
            let lo = a.min2[da] + b.min2[db];
            if lo < out.min2[d] {
                out.min2[d] = lo;
            }
            let hi = a.max2[da] + b.max2[db];
            if hi > out.max2[d] {
                out.max2[d] = hi;
            }
        }
    }
    out
}

fn sampled_accumulate(
    space: &Space,
    spec: &EmbeddingSpec,
    r_max: u32,
    seed: u64,
    pairs: u64,
    opts: &ProfileOptions,
) -> Result<ProfileAccumulator> {
    let radius = window_radius(r_max);
    let (points, vectors) = embed_ball(space, spec, radius, opts.ball_cap)?;
    let n = points.len();
    if n < 2 {
        return Err(Error::Config("sampling needs at least two points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = ProfileAccumulator::new();
    let mut drawn = 0u64;
    while drawn < pairs {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        drawn += 1;
        let d = space.distance(&points[i], &points[j])?;
        let img = vectors[i].sub(&vectors[j]).norm();
        acc.record_pair(d, img);
    }
    Ok(acc)
}

/// Power-law fit of the profile tail over a radius window.
#[derive(Clone, Debug, serde::Serialize)]
pub struct AsymptoticEstimate {
    /// Fitted exponent of `rho(r) ~ r^slope`.
    pub slope: f64,
    /// Intercept of the fit in log-log coordinates (natural log).
    pub intercept: f64,
    /// Smallest `rho` over the window, a floor for the modulus there.
    pub tail_min: f64,
    /// The window `[lo, hi]` the fit used.
    pub window: (u32, u32),
    /// Root-mean-square misfit in log space.
    pub residual: f64,
    /// Strategy of the underlying profile.
    pub strategy: String,
}

/// Fits `log rho` against `log r` on `[lo, hi]` by least squares.
pub fn asymptotic_compression(
    profile: &CompressionProfile,
    lo: u32,
    hi: u32,
) -> Result<AsymptoticEstimate> {
    if lo == 0 || hi < lo {
        return Err(Error::Config(format!("bad fit window [{lo}, {hi}]")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut tail_min = f64::INFINITY;
    for r in lo..=hi {
        if let Some(rho) = profile.rho(r) {
            if rho > 0.0 {
                xs.push((r as f64).ln());
                ys.push(rho.ln());
                tail_min = tail_min.min(rho);
            }
        }
    }
    let n = xs.len();
    if n < 4 {
        return Err(Error::Estimation(format!(
            "fit window [{lo}, {hi}] contains only {n} usable radii, need 4"
        )));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::Estimation("degenerate fit window".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut sse = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let e = y - (slope * x + intercept);
        sse += e * e;
    }
    Ok(AsymptoticEstimate {
        slope,
        intercept,
        tail_min,
        window: (lo, hi),
        residual: (sse / nf).sqrt(),
        strategy: profile.strategy.clone(),
    })
}

/// Affine upper bound `rho_plus(r) <= c r + d` fitted from a profile.
#[derive(Clone, Copy, Debug)]
pub struct LipschitzFit {
    pub c: f64,
    pub d: f64,
    pub anchor: u32,
}

/// Two-pass fit: the slope is the largest secant from the anchor radius,
/// then the offset is raised until the bound covers every tested radius.
pub fn large_scale_lipschitz_fit(
    profile: &CompressionProfile,
    anchor: u32,
) -> Result<LipschitzFit> {
    let base = profile
        .rho_plus(anchor)
        .ok_or_else(|| Error::Estimation(format!("no pairs at the anchor radius {anchor}")))?;
    let mut c = 0.0f64;
    for row in profile.rows() {
        if row.r > anchor && row.rho_plus.is_finite() {
            c = c.max((row.rho_plus - base) / (row.r - anchor) as f64);
        }
    }
    let mut d = 0.0f64;
    for row in profile.rows() {
        if row.rho_plus.is_finite() {
            d = d.max(row.rho_plus - c * row.r as f64);
        }
    }
    Ok(LipschitzFit { c, d, anchor })
}

/// Checks the product rule: the direct sum of embeddings compresses at
/// least as well as `2^(-1/2) min_i rho_i(r / 2)`.  Factor profiles are
/// evaluated at `floor(r / 2)` so the right side is never overstated.
pub fn product_check(
    product: &CompressionProfile,
    factors: &[&CompressionProfile],
) -> CheckReport {
    let mut report = CheckReport::new("product-rule", Verdict::Pass);
    if factors.is_empty() {
        report.verdict = Verdict::Inconclusive;
        return report.with_detail("no factor profiles supplied");
    }
    let mut tested = 0u32;
    let scale = 0.5f64.sqrt();
    for r in 1..=product.r_max() {
        let half = r / 2;
        if half == 0 {
            continue;
        }
        let Some(lhs) = product.rho(r) else { continue };
        let mut rhs = f64::INFINITY;
        for f in factors {
            match f.rho(half) {
                Some(v) => rhs = rhs.min(v),
                None => {
                    rhs = f64::NAN;
                    break;
                }
            }
        }
        if !rhs.is_finite() {
            continue;
        }
        let rhs = scale * rhs;
        tested += 1;
        if lhs < rhs - 1e-9 {
            report.verdict = Verdict::Fail;
            report = report.with_detail(format!(
                "r={r}: product rho {lhs:.6} fell below the factor bound {rhs:.6}"
            ));
        }
    }
    if tested == 0 {
        report.verdict = Verdict::Inconclusive;
        return report.with_detail("no comparable radii between the profiles");
    }
    report
        .with_constant("scale", scale)
        .with_constant("radii_tested", tested as f64)
        .with_range(1.0, product.r_max() as f64)
}

/// Range floor below which an inner embedding counts as bounded, making
/// the composition rule vacuous.
pub const BOUNDED_RANGE_TOL: f64 = 0.01;

/// Checks the composition rule on measured profiles: the composite must
/// satisfy `rho_fg(r) >= rho_f(floor(rho_g(r)))`.  A bounded inner range
/// short-circuits to a trivially satisfied report.
pub fn composition_check(
    composite: &CompressionProfile,
    outer: &CompressionProfile,
    inner: &CompressionProfile,
) -> CheckReport {
    let mut report = CheckReport::new("composition-rule", Verdict::Pass);
    let inner_range = inner.rho_plus(inner.r_max()).unwrap_or(0.0);
    report = report.with_constant("inner_range", inner_range);
    if inner_range < BOUNDED_RANGE_TOL {
        return report.with_detail(
            "inner embedding has numerically bounded range; the composite \
             bound is vacuous on this window",
        );
    }
    let mut tested = 0u32;
    for r in 1..=composite.r_max() {
        let Some(lhs) = composite.rho(r) else { continue };
        let Some(inner_rho) = inner.rho(r) else { continue };
        let arg = (inner_rho.floor() as u32).min(outer.r_max());
        if arg == 0 {
            continue;
        }
        let Some(rhs) = outer.rho(arg) else { continue };
        tested += 1;
        if lhs < rhs - 1e-9 {
            report.verdict = Verdict::Fail;
            report = report.with_detail(format!(
                "r={r}: composite rho {lhs:.6} below chained bound {rhs:.6} \
                 (inner rho {inner_rho:.6})"
            ));
        }
    }
    if tested == 0 {
        report.verdict = Verdict::Inconclusive;
        return report.with_detail("no comparable radii between the profiles");
    }
    report
        .with_constant("radii_tested", tested as f64)
        .with_range(1.0, composite.r_max() as f64)
}
