//! Spaces, points, word metrics and ball enumeration.
//!
//! A [`GroupSpec`] is pure configuration (parseable from the CLI); building
//! it yields a [`Space`] that owns whatever tables the metric needs (the
//! Heisenberg group precomputes a BFS length table).  All group metrics are
//! integer-valued; point clouds carry real metrics.

pub mod cloud;
pub mod heisenberg;
pub mod word;

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use serde::Serialize;

use crate::{Error, Result};
use cloud::PointCloud;
use heisenberg::LengthTable;
use word::ReducedWord;

/// Default cap on enumerated ball sizes; override per call or via the CLI.
pub const DEFAULT_BALL_CAP: u64 = 4_000_000;

#[derive(Clone, Debug)]
pub enum GroupSpec {
    /// Free group of the given rank with its standard symmetric generators.
    Free { rank: usize },
    /// `Z^dim` with the l1 word metric of the standard generators.
    Lattice { dim: usize },
    /// Discrete Heisenberg group; lengths from a BFS table of this radius.
    Heisenberg { table_radius: u32 },
    /// Direct product with the sum metric `d = d_1 + ... + d_k`.
    Product(Vec<GroupSpec>),
    /// Finite point cloud with an explicit metric.
    Cloud(Arc<PointCloud>),
}

impl GroupSpec {
    pub fn free(rank: usize) -> Self {
        GroupSpec::Free { rank }
    }

    pub fn lattice(dim: usize) -> Self {
        GroupSpec::Lattice { dim }
    }

    pub fn heisenberg() -> Self {
        GroupSpec::Heisenberg {
            table_radius: heisenberg::DEFAULT_TABLE_RADIUS,
        }
    }

    /// Number of standard generators (with inverses), where defined.
    pub fn generator_count(&self) -> Option<u64> {
        match self {
            GroupSpec::Free { rank } => Some(2 * *rank as u64),
            GroupSpec::Lattice { dim } => Some(2 * *dim as u64),
            GroupSpec::Heisenberg { .. } => Some(4),
            GroupSpec::Product(_) | GroupSpec::Cloud(_) => None,
        }
    }

    pub fn build(&self) -> Result<Space> {
        let kind = match self {
            GroupSpec::Free { rank } => {
                if *rank == 0 {
                    return Err(Error::Config("free group rank must be at least 1".into()));
                }
                SpaceKind::Free { rank: *rank }
            }
            GroupSpec::Lattice { dim } => SpaceKind::Lattice { dim: *dim },
            GroupSpec::Heisenberg { table_radius } => SpaceKind::Heisenberg {
                table: Arc::new(LengthTable::compute(*table_radius, DEFAULT_BALL_CAP)?),
            },
            GroupSpec::Product(factors) => {
                if factors.len() < 2 {
                    return Err(Error::Config("product needs at least two factors".into()));
                }
                SpaceKind::Product {
                    factors: factors.iter().map(GroupSpec::build).collect::<Result<_>>()?,
                }
            }
            GroupSpec::Cloud(cloud) => SpaceKind::Cloud {
                cloud: Arc::clone(cloud),
            },
        };
        Ok(Space {
            spec: self.clone(),
            kind,
        })
    }
}

/// Splits on commas that sit outside parentheses.
fn split_factors(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(text[start..].trim());
    parts
}

impl GroupSpec {
    /// Parses the surface syntax: `free:2`, `z:3`, `heis`, `heis:10`,
    /// `prod(z:1,free:2)`.  Clouds are constructed programmatically and
    /// have no parseable form.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("prod(") {
            let inner = rest.strip_suffix(')').ok_or_else(|| {
                Error::Config(format!("unbalanced parentheses in {text:?}"))
            })?;
            let factors = split_factors(inner)
                .iter()
                .map(|p| GroupSpec::parse(p))
                .collect::<Result<Vec<_>>>()?;
            if factors.len() < 2 {
                return Err(Error::Config("prod() needs at least two factors".into()));
            }
            return Ok(GroupSpec::Product(factors));
        }
        let (head, param) = match text.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (text, None),
        };
        let number = |p: Option<&str>, what: &str| -> Result<usize> {
            let p = p.ok_or_else(|| Error::Config(format!("{head} needs {what}")))?;
            match p.parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(Error::Config(format!("bad {what} {p:?}"))),
            }
        };
        match head {
            "free" => Ok(GroupSpec::free(number(param, "a rank")?)),
            "z" => Ok(GroupSpec::lattice(number(param, "a dimension")?)),
            "heis" => match param {
                None => Ok(GroupSpec::heisenberg()),
                Some(_) => Ok(GroupSpec::Heisenberg {
                    table_radius: number(param, "a table radius")? as u32,
                }),
            },
            other => Err(Error::Config(format!("unknown space {other:?}"))),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Free { rank } => write!(f, "free:{rank}"),
            GroupSpec::Lattice { dim } => write!(f, "z:{dim}"),
            GroupSpec::Heisenberg { .. } => write!(f, "heis"),
            GroupSpec::Product(fs) => {
                write!(f, "prod(")?;
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, ")")
            }
            GroupSpec::Cloud(c) => write!(f, "cloud:{}", c.name),
        }
    }
}

/// A point of some space.  Variants must match the space they are used with.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Point {
    Word(ReducedWord),
    Lattice(Vec<i64>),
    Heis(heisenberg::HeisPoint),
    Tuple(Vec<Point>),
    Cloud(usize),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Word(w) => write!(f, "{w}"),
            Point::Lattice(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "{}", parts.join(";"))
            }
            Point::Heis(p) => write!(f, "{};{};{}", p[0], p[1], p[2]),
            Point::Tuple(ps) => {
                let parts: Vec<String> = ps.iter().map(Point::to_string).collect();
                write!(f, "{}", parts.join("|"))
            }
            Point::Cloud(i) => write!(f, "#{i}"),
        }
    }
}

enum SpaceKind {
    Free { rank: usize },
    Lattice { dim: usize },
    Heisenberg { table: Arc<LengthTable> },
    Product { factors: Vec<Space> },
    Cloud { cloud: Arc<PointCloud> },
}

/// A built space: spec plus any metric tables.
pub struct Space {
    spec: GroupSpec,
    kind: SpaceKind,
}

impl Space {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn identity(&self) -> Point {
        match &self.kind {
            SpaceKind::Free { .. } => Point::Word(ReducedWord::identity()),
            SpaceKind::Lattice { dim } => Point::Lattice(vec![0; *dim]),
            SpaceKind::Heisenberg { .. } => Point::Heis(heisenberg::IDENTITY),
            SpaceKind::Product { factors } => {
                Point::Tuple(factors.iter().map(Space::identity).collect())
            }
            SpaceKind::Cloud { .. } => Point::Cloud(0),
        }
    }

    pub fn heisenberg_table(&self) -> Option<&LengthTable> {
        match &self.kind {
            SpaceKind::Heisenberg { table } => Some(table),
            _ => None,
        }
    }

    pub fn cloud(&self) -> Option<&PointCloud> {
        match &self.kind {
            SpaceKind::Cloud { cloud } => Some(cloud),
            _ => None,
        }
    }

    /// Distance between two points.  Integer for group metrics (exactly
    /// representable), real for clouds.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        match (&self.kind, x, y) {
            (SpaceKind::Free { .. }, Point::Word(a), Point::Word(b)) => {
                Ok(a.distance(b) as f64)
            }
            (SpaceKind::Lattice { dim }, Point::Lattice(a), Point::Lattice(b)) => {
                if a.len() != *dim || b.len() != *dim {
                    return Err(Error::Domain("lattice point dimension mismatch".into()));
                }
                Ok(a.iter().zip(b).map(|(u, v)| u.abs_diff(*v)).sum::<u64>() as f64)
            }
            (SpaceKind::Heisenberg { table }, Point::Heis(p), Point::Heis(q)) => {
                Ok(table.distance(*p, *q)? as f64)
            }
            (SpaceKind::Product { factors }, Point::Tuple(a), Point::Tuple(b)) => {
                if a.len() != factors.len() || b.len() != factors.len() {
                    return Err(Error::Domain("tuple arity mismatch".into()));
                }
                let mut sum = 0.0;
                for ((f, p), q) in factors.iter().zip(a).zip(b) {
                    sum += f.distance(p, q)?;
                }
                Ok(sum)
            }
            (SpaceKind::Cloud { cloud }, Point::Cloud(i), Point::Cloud(j)) => {
                cloud.distance(*i, *j)
            }
            _ => Err(Error::Domain(format!(
                "point kind does not match space {}",
                self.spec
            ))),
        }
    }

    /// Exact sphere cardinality `sigma(n)` of the group, where a closed form
    /// or a precomputed table is available.  `None` means unknown (further
    /// than the Heisenberg table, overflow, or a point cloud).
    pub fn sphere_count(&self, n: u32) -> Option<u64> {
        match &self.kind {
            SpaceKind::Free { rank } => {
                if n == 0 {
                    return Some(1);
                }
                let k = *rank as u64;
                (2 * k).checked_mul((2 * k - 1).checked_pow(n - 1)?)
            }
            SpaceKind::Lattice { dim } => Some(lattice_sphere(*dim as u64, n as u64)?),
            SpaceKind::Heisenberg { table } => {
                table.sphere_sizes().get(n as usize).copied()
            }
            SpaceKind::Product { factors } => {
                let mut acc = 0u64;
                for split in compositions(n, factors.len()) {
                    let mut term = 1u64;
                    for (f, r) in factors.iter().zip(&split) {
                        term = term.checked_mul(f.sphere_count(*r)?)?;
                    }
                    acc = acc.checked_add(term)?;
                }
                Some(acc)
            }
            SpaceKind::Cloud { .. } => None,
        }
    }

    /// Exact ball cardinality where sphere counts are available.
    pub fn ball_size(&self, radius: u32) -> Option<u64> {
        let mut total = 0u64;
        for n in 0..=radius {
            total = total.checked_add(self.sphere_count(n)?)?;
        }
        Some(total)
    }

    /// Enumerates the closed ball of the given radius around the identity in
    /// deterministic order (by length, then a fixed per-space order).
    pub fn ball(&self, radius: u32, cap: u64) -> Result<Ball> {
        if let Some(size) = self.ball_size(radius) {
            if size > cap {
                return Err(Error::Capacity {
                    predicted: size,
                    cap,
                });
            }
        }
        let mut points = Vec::new();
        let mut lengths: Vec<u32> = Vec::new();
        match &self.kind {
            SpaceKind::Free { rank } => {
                for n in 0..=radius {
                    for w in word::words_of_length(*rank, n as usize) {
                        points.push(Point::Word(w));
                        lengths.push(n);
                    }
                }
            }
            SpaceKind::Lattice { dim } => {
                let mut coords = vec![0i64; *dim];
                let mut raw: Vec<(u32, Vec<i64>)> = Vec::new();
                enumerate_lattice(radius as i64, *dim, 0, &mut coords, &mut raw);
                raw.sort(); // by length, then lexicographic
                for (n, v) in raw {
                    points.push(Point::Lattice(v));
                    lengths.push(n);
                }
            }
            SpaceKind::Heisenberg { table } => {
                if radius > table.radius() {
                    return Err(Error::OutOfRange {
                        required: radius,
                        cap: table.radius(),
                    });
                }
                for p in table.points() {
                    let l = table.length(*p)?;
                    if l <= radius {
                        points.push(Point::Heis(*p));
                        lengths.push(l);
                    }
                }
            }
            SpaceKind::Product { factors } => {
                let factor_balls: Vec<Ball> = factors
                    .iter()
                    .map(|f| f.ball(radius, cap))
                    .collect::<Result<_>>()?;
                let mut raw: Vec<(u32, Vec<Point>)> = Vec::new();
                let mut tuple = Vec::with_capacity(factors.len());
                product_tuples(&factor_balls, radius, 0, 0, &mut tuple, &mut raw);
                raw.sort_by_key(|(n, _)| *n);
                for (n, t) in raw {
                    points.push(Point::Tuple(t));
                    lengths.push(n);
                }
            }
            SpaceKind::Cloud { cloud } => {
                for i in 0..cloud.len() {
                    let d = cloud.distance(0, i)?;
                    points.push(Point::Cloud(i));
                    lengths.push(d.ceil() as u32);
                }
            }
        }
        if points.len() as u64 > cap {
            return Err(Error::Capacity {
                predicted: points.len() as u64,
                cap,
            });
        }
        let mut sphere_sizes = vec![0u64; radius as usize + 1];
        for &l in &lengths {
            if let Some(slot) = sphere_sizes.get_mut(l as usize) {
                *slot += 1;
            }
        }
        Ok(Ball {
            radius,
            points,
            lengths,
            sphere_sizes,
        })
    }
}

/// `sigma(n)` for `Z^dim`: the count of integer vectors of l1 norm `n`,
/// via the choose-support formula `sum_i 2^i C(dim,i) C(n-1,i-1)`.
fn lattice_sphere(dim: u64, n: u64) -> Option<u64> {
    if n == 0 {
        return Some(1);
    }
    if dim == 0 {
        return Some(0);
    }
    let mut total = 0u64;
    for i in 1..=dim.min(n) {
        let term = 1u64
            .checked_shl(i as u32)?
            .checked_mul(binomial(dim, i)?)?
            .checked_mul(binomial(n - 1, i - 1)?)?;
        total = total.checked_add(term)?;
    }
    Some(total)
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

/// All ways to write `n` as an ordered sum of `parts` nonnegative integers.
fn compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; parts];
    fn rec(n: u32, idx: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx + 1 == current.len() {
            current[idx] = n;
            out.push(current.clone());
            return;
        }
        for v in 0..=n {
            current[idx] = v;
            rec(n - v, idx + 1, current, out);
        }
    }
    if parts > 0 {
        rec(n, 0, &mut current, &mut out);
    }
    out
}

fn enumerate_lattice(
    budget: i64,
    remaining_dims: usize,
    used: i64,
    coords: &mut Vec<i64>,
    out: &mut Vec<(u32, Vec<i64>)>,
) {
    if remaining_dims == 0 {
        out.push((used as u32, coords.clone()));
        return;
    }
    let idx = coords.len() - remaining_dims;
    let remaining = budget - used;
    for v in -remaining..=remaining {
        coords[idx] = v;
        enumerate_lattice(budget, remaining_dims - 1, used + v.abs(), coords, out);
    }
    coords[idx] = 0;
}

fn product_tuples(
    balls: &[Ball],
    radius: u32,
    idx: usize,
    used: u32,
    tuple: &mut Vec<Point>,
    out: &mut Vec<(u32, Vec<Point>)>,
) {
    if idx == balls.len() {
        out.push((used, tuple.clone()));
        return;
    }
    let ball = &balls[idx];
    for (p, &l) in ball.points.iter().zip(&ball.lengths) {
        if used + l > radius {
            continue;
        }
        tuple.push(p.clone());
        product_tuples(balls, radius, idx + 1, used + l, tuple, out);
        tuple.pop();
    }
}

/// A closed ball around the identity with per-point lengths.
#[derive(Clone, Debug)]
pub struct Ball {
    pub radius: u32,
    pub points: Vec<Point>,
    pub lengths: Vec<u32>,
    pub sphere_sizes: Vec<u64>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index lookup table for membership tests.
    pub fn index(&self) -> HashMap<&Point, usize> {
        self.points.iter().enumerate().map(|(i, p)| (p, i)).collect()
    }

    /// Writes `index,word_or_coords,length` rows.
    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "index,word_or_coords,length")?;
        for (i, (p, l)) in self.points.iter().zip(&self.lengths).enumerate() {
            writeln!(out, "{i},{p},{l}")?;
        }
        Ok(())
    }

    /// Writes `n,sigma` growth rows.
    pub fn write_growth_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "n,sigma")?;
        for (n, sigma) in self.sphere_sizes.iter().enumerate() {
            writeln!(out, "{n},{sigma}")?;
        }
        Ok(())
    }

    pub fn summary(&self) -> BallSummary {
        BallSummary {
            radius: self.radius,
            points: self.len() as u64,
            sphere_sizes: self.sphere_sizes.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BallSummary {
    pub radius: u32,
    pub points: u64,
    pub sphere_sizes: Vec<u64>,
}
