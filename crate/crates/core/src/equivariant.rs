//! The left-translation cocycle on the Cayley tree of a free group.
//!
//! Every edge of the tree joins some `w` to `w x` with `x` a positive
//! generator, which orients the edge once and for all; translation by
//! `g` sends the edge `{a, b}` to `{ga, gb}` and preserves that
//! orientation.  The geodesic vector `b(s)` walks from the identity to
//! `s` and records `+1` on each edge crossed along its orientation and
//! `-1` on each edge crossed against it.  The cocycle identity
//!
//! ```text
//! b(s t) = b(s) + pi_s b(t)
//! ```
//!
//! then holds exactly: the concatenated walk through `s` retraces the
//! cancelled part of the product in the opposite direction, and those
//! signed contributions vanish edge by edge.  All coefficients are
//! integers, so verifying the identity in floating point is exact, not
//! approximate.
//!
//! Because `|b(s)| = sqrt(|s|)` and translation preserves norms, the
//! induced equivariant embedding has compression exactly `sqrt(r)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compression::{CompressionProfile, ProfileRow};
use crate::embeddings::{CoordinateKey, HilbertVector};
use crate::report::{CheckReport, Verdict};
use crate::spaces::word::ReducedWord;
use crate::{Error, Result};

/// The geodesic cocycle `b(s)`: weight `+1` or `-1` on every edge of
/// `[e, s]`, the sign recording whether the walk from the identity
/// crosses the edge along its positive-generator orientation.
pub fn cocycle(s: &ReducedWord) -> HilbertVector {
    let mut out = HilbertVector::zero();
    for m in 1..=s.len() {
        let sign = if s.letters()[m - 1] > 0 { 1.0 } else { -1.0 };
        out.set_atom(CoordinateKey::edge(s.prefix(m - 1), s.prefix(m)), sign);
    }
    out
}

/// The translation action on edge-supported vectors.
pub fn translate(g: &ReducedWord, v: &HilbertVector) -> Result<HilbertVector> {
    let mut out = HilbertVector::zero();
    for (key, value) in v.atoms() {
        match key {
            CoordinateKey::Edge(ends) => {
                let (a, b) = (&ends.0, &ends.1);
                out.set_atom(CoordinateKey::edge(g.mul(a), g.mul(b)), value);
            }
            other => {
                return Err(Error::Domain(format!(
                    "translation is defined on edge coordinates only, found {other:?}"
                )))
            }
        }
    }
    Ok(out)
}

/// Residual `|b(gh) - b(g) - pi_g b(h)|` for one pair; zero when the
/// cocycle identity holds.
pub fn cocycle_residual(g: &ReducedWord, h: &ReducedWord) -> Result<f64> {
    let lhs = cocycle(&g.mul(h));
    let rhs = cocycle(g).add(&translate(g, &cocycle(h))?);
    Ok(lhs.sub(&rhs).norm())
}

fn random_word(rng: &mut ChaCha8Rng, rank: u32, len: usize) -> ReducedWord {
    let mut letters: Vec<i16> = Vec::with_capacity(len);
    while letters.len() < len {
        let gen = rng.random_range(1..=rank as i16);
        let signed = if rng.random_range(0..2) == 0 { gen } else { -gen };
        if letters.last() == Some(&-signed) {
            continue;
        }
        letters.push(signed);
    }
    ReducedWord::new(&letters).expect("letters are nonzero")
}

/// Samples random pairs and measures the worst cocycle residual.
pub fn check_cocycle(rank: u32, max_len: usize, pairs: u64, seed: u64) -> Result<CheckReport> {
    if rank == 0 {
        return Err(Error::Config("rank must be at least one".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut norm_mismatch = 0.0f64;
    for _ in 0..pairs {
        let lg = rng.random_range(0..=max_len);
        let lh = rng.random_range(0..=max_len);
        let g = random_word(&mut rng, rank, lg);
        let h = random_word(&mut rng, rank, lh);
        worst = worst.max(cocycle_residual(&g, &h)?);
        // Translation invariance of the induced distance:
        // |b(g) - b(h)| must equal sqrt d(g, h).
        let diff2 = cocycle(&g).sub(&cocycle(&h)).norm2();
        norm_mismatch = norm_mismatch.max((diff2 - g.distance(&h) as f64).abs());
    }
    let mut report = CheckReport::new("cocycle", Verdict::Pass);
    if worst > 1e-12 {
        report.verdict = Verdict::Fail;
        report = report.with_detail(format!("worst residual {worst:.3e}"));
    }
    if norm_mismatch > 1e-9 {
        report.verdict = Verdict::Fail;
        report = report.with_detail(format!(
            "squared difference norms drifted from word distances by {norm_mismatch:.3e}"
        ));
    }
    Ok(report
        .with_constant("pairs", pairs as f64)
        .with_constant("worst_residual", worst)
        .with_constant("norm_mismatch", norm_mismatch)
        .with_range(0.0, (2 * max_len) as f64))
}

/// Compression profile of the cocycle embedding, measured two ways per
/// radius and cross-checked: through norms of sphere representatives
/// (equivariance moves any pair to such a representative) and through
/// explicitly constructed pairs at each distance.
pub fn equivariant_compression(
    rank: u32,
    r_max: u32,
    samples_per_radius: u32,
    seed: u64,
) -> Result<CompressionProfile> {
    if rank == 0 {
        return Err(Error::Config("rank must be at least one".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(r_max as usize);
    for r in 1..=r_max {
        let mut rho: f64 = f64::INFINITY;
        for _ in 0..samples_per_radius.max(1) {
            // Route one: a sphere representative of length r.
            let s = random_word(&mut rng, rank, r as usize);
            let by_norm = cocycle(&s).norm();
            // Route two: a pair at distance r built from a random split
            // r = kg + kh with diverging first letters.
            let kg = rng.random_range(0..=r) as usize;
            let g = random_word(&mut rng, rank, kg);
            let mut h;
            loop {
                h = random_word(&mut rng, rank, r as usize - kg);
                if g.common_prefix_len(&h) == 0 || g.is_empty() || h.is_empty() {
                    break;
                }
            }
            if g.distance(&h) != r {
                return Err(Error::Estimation(format!(
                    "constructed pair misses distance {r}"
                )));
            }
            let by_pair = cocycle(&g).sub(&cocycle(&h)).norm();
            if (by_norm - by_pair).abs() > 1e-9 {
                return Err(Error::Estimation(format!(
                    "routes disagree at r={r}: {by_norm} vs {by_pair}"
                )));
            }
            rho = rho.min(by_norm.min(by_pair));
        }
        rows.push(ProfileRow {
            r,
            rho,
            rho_star: rho,
            rho_plus: rho,
            pairs: 2 * samples_per_radius as u64,
        });
    }
    Ok(CompressionProfile::from_rows(rows, "equivariant".into()))
}
