//! Named comparison fixtures for the coarse checks.
//!
//! Each fixture is a small sampled map chosen to sit on one side of a
//! dividing line between coarse notions:
//!
//! * `two_lines`: uniformly embedded and large-scale Lipschitz, but not
//!   Lipschitz; close pairs are pushed a unit apart.
//! * `squares`: uniformly embedded but not large-scale Lipschitz; image
//!   distances outgrow any affine bound.
//! * `doubling`: a clean quasi-isometry of the integers with ratio two.
//! * `genset`: one free group under two generating sets; the identity
//!   map is a quasi-isometry with ratio two and no additive error.
//! * `heis_center`: the center of the discrete Heisenberg group, whose
//!   ambient distances grow like the square root of the central
//!   parameter, a distorted subgroup that defeats fixed chain constants.

use std::collections::HashMap;

use crate::coarse::MapSample;
use crate::spaces::heisenberg::{self, LengthTable};
use crate::spaces::word::{words_of_length, ReducedWord};
use crate::{Error, Result};

/// Points `(n, 1/n)` and `(n, 0)` mapped to `(n, 1)` and `(n, 0)`.
/// The vertical pairs contract to distance `1/n` in the domain while the
/// images stay one apart, so pointwise Lipschitz constants grow like `n`,
/// yet `d_img <= d_dom + 1` everywhere.
pub fn two_lines_sample(n_max: u32) -> Result<MapSample> {
    if n_max == 0 {
        return Err(Error::Config("need at least one point pair".into()));
    }
    let mut points = Vec::new();
    for n in 1..=n_max {
        let x = n as f64;
        points.push(((x, 1.0 / x), (x, 1.0)));
        points.push(((x, 0.0), (x, 0.0)));
    }
    let euclid = |a: (f64, f64), b: (f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
    MapSample::from_points(
        "two_lines",
        &points,
        move |a, b| euclid(a.0, b.0),
        move |a, b| euclid(a.1, b.1),
    )
}

/// The set `{ n^2 }` on the line mapped by squaring.  Image and domain
/// distances compare as `|n^4 - m^4| = |n^2 - m^2| (n^2 + m^2)`, so every
/// affine bound is eventually violated even though both moduli exist.
pub fn squares_sample(n_max: u32) -> Result<MapSample> {
    if n_max == 0 {
        return Err(Error::Config("need at least one point".into()));
    }
    let points: Vec<f64> = (1..=n_max).map(|n| (n as f64).powi(2)).collect();
    MapSample::from_points(
        "squares",
        &points,
        |a, b| (a - b).abs(),
        |a, b| (a * a - b * b).abs(),
    )
}

/// `n` to `2n` on a symmetric window of the integers.
pub fn doubling_sample(n_max: u32) -> Result<MapSample> {
    let points: Vec<f64> = (-(n_max as i64)..=n_max as i64).map(|n| n as f64).collect();
    MapSample::from_points(
        "doubling",
        &points,
        |a, b| (a - b).abs(),
        |a, b| 2.0 * (a - b).abs(),
    )
}

/// Ambient distance matrix of the central powers `c^0 .. c^{n_max}` in
/// the discrete Heisenberg group, where `c` generates the center.
/// `d(c^a, c^b)` is the word length of `c^{b-a}`, which grows like the
/// square root of `|b - a|`.
pub fn heis_center_matrix(table: &LengthTable, n_max: u32) -> Result<Vec<Vec<f64>>> {
    let pairs = table.central_lengths(n_max as i64);
    if pairs.len() < n_max as usize {
        return Err(Error::Domain(format!(
            "central power {n_max} does not fit in the radius-{} length table",
            table.radius()
        )));
    }
    let mut lengths = vec![0u32; n_max as usize + 1];
    for (m, l) in pairs {
        lengths[m as usize] = l;
    }
    let n = n_max as usize + 1;
    let mut dist = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in (a + 1)..n {
            let d = lengths[b - a] as f64;
            dist[a][b] = d;
            dist[b][a] = d;
        }
    }
    Ok(dist)
}

/// The central powers as a parameterized chain: domain distance is the
/// parameter gap `|a - b|`, image distance is the ambient word metric.
pub fn heis_center_sample(table: &LengthTable, n_max: u32) -> Result<MapSample> {
    let ambient = heis_center_matrix(table, n_max)?;
    let n = n_max as usize + 1;
    let mut dom = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in 0..n {
            dom[a][b] = (a as f64 - b as f64).abs();
        }
    }
    MapSample::new("heis_center", dom, ambient)
}

/// Word lengths over the enlarged generating set `{a, b, ab}` (and
/// inverses), by breadth-first search out to `radius`.
fn enlarged_lengths(radius: u32) -> HashMap<ReducedWord, u32> {
    let generators: Vec<ReducedWord> = [
        vec![1i16],
        vec![-1],
        vec![2],
        vec![-2],
        vec![1, 2],
        vec![-2, -1],
    ]
    .into_iter()
    .map(|ls| ReducedWord::new(&ls).expect("generator letters are nonzero"))
    .collect();
    let mut lengths = HashMap::new();
    lengths.insert(ReducedWord::identity(), 0u32);
    let mut frontier = vec![ReducedWord::identity()];
    for depth in 1..=radius {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &generators {
                let v = w.mul(g);
                if !lengths.contains_key(&v) {
                    lengths.insert(v.clone(), depth);
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    lengths
}

/// The identity of the rank-2 free group, measured in the standard
/// generators against the enlarged set `{a, b, ab}`.  Distances compare
/// within a factor of two exactly: the new letter `ab` halves some words
/// and nothing shrinks further.
pub fn genset_sample(radius: u32) -> Result<MapSample> {
    if radius == 0 {
        return Err(Error::Config("need a positive radius".into()));
    }
    let mut points = Vec::new();
    for len in 0..=radius {
        points.extend(words_of_length(2, len as usize));
    }
    // Standard-set distance reaches 2 * radius between ball points, and
    // the enlarged distance never exceeds it.
    let lengths = enlarged_lengths(2 * radius);
    for x in &points {
        for y in &points {
            if !lengths.contains_key(&x.inverse().mul(y)) {
                return Err(Error::Domain(
                    "enlarged-set search did not cover the ball".into(),
                ));
            }
        }
    }
    MapSample::from_points(
        "genset",
        &points,
        |x: &ReducedWord, y: &ReducedWord| x.distance(y) as f64,
        move |x, y| lengths[&x.inverse().mul(y)] as f64,
    )
}

/// The default Heisenberg length table used by the fixtures.
pub fn default_heis_table() -> Result<LengthTable> {
    LengthTable::compute(
        heisenberg::DEFAULT_TABLE_RADIUS,
        crate::spaces::DEFAULT_BALL_CAP,
    )
}
