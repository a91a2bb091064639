//! Explicit embeddings into Hilbert space, evaluated as sparse vectors.
//!
//! Vectors live in an `l2` space whose coordinates are either discrete keys
//! (Cayley-tree edges, lattice axes) or characteristic functions of real
//! intervals (for staircase embeddings of the line, where the ambient space
//! is `L2(R)` per axis).  Both parts support exact inner products: the
//! discrete part by key matching, the interval part by overlap length.
//!
//! The tree embedding of a free group sends a word `s` to a weighted sum of
//! the edges on the geodesic from `s` to the identity.  Edges are indexed
//! from `s` toward the identity (`j = 1` is the edge at `s`); the weight of
//! the `j`-th edge is `j^eps`.  This orientation is the one under which the
//! telescoping bound on generator steps holds, and it gives the closed form
//!
//! ```text
//! |f(s) - f(t)|^2 = sum_{j<=|s|-p} j^(2 eps) + sum_{j<=|t|-p} j^(2 eps)
//!                 + sum_{m<=p} ((|s|-m+1)^eps - (|t|-m+1)^eps)^2
//! ```
//!
//! where `p` is the common prefix length.  For `eps = 0` this collapses to
//! `d(s, t)` exactly.

use std::collections::BTreeMap;
use std::fmt;

use crate::spaces::word::ReducedWord;
use crate::spaces::Point;
use crate::{Error, Result};

/// A discrete coordinate of the ambient `l2` space.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CoordinateKey {
    /// An unoriented Cayley-tree edge, stored with endpoints in
    /// lexicographic order.
    Edge(Box<(ReducedWord, ReducedWord)>),
    /// A lattice axis.
    Axis(u32),
    /// A coordinate of the `i`-th summand of a direct sum.
    Sub(u16, Box<CoordinateKey>),
}

impl CoordinateKey {
    /// Canonical edge key; endpoint order is normalized.
    pub fn edge(a: ReducedWord, b: ReducedWord) -> Self {
        debug_assert_eq!(a.distance(&b), 1, "edge endpoints must be adjacent");
        if a <= b {
            CoordinateKey::Edge(Box::new((a, b)))
        } else {
            CoordinateKey::Edge(Box::new((b, a)))
        }
    }
}

/// A weighted characteristic function of a real interval on some axis.
#[derive(Clone, Copy, Debug)]
pub struct AxisInterval {
    pub comp: u16,
    pub axis: u32,
    pub lo: f64,
    pub hi: f64,
    pub weight: f64,
}

impl AxisInterval {
    fn overlap(&self, other: &Self) -> f64 {
        if self.comp != other.comp || self.axis != other.axis {
            return 0.0;
        }
        (self.hi.min(other.hi) - self.lo.max(other.lo)).max(0.0)
    }
}

/// A sparse vector in the ambient Hilbert space.
#[derive(Clone, Debug, Default)]
pub struct HilbertVector {
    atoms: BTreeMap<CoordinateKey, f64>,
    intervals: Vec<AxisInterval>,
}

impl HilbertVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.intervals.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&CoordinateKey, f64)> {
        self.atoms.iter().map(|(k, &v)| (k, v))
    }

    pub fn support_len(&self) -> usize {
        self.atoms.len() + self.intervals.len()
    }

    pub fn set_atom(&mut self, key: CoordinateKey, value: f64) {
        if value == 0.0 {
            self.atoms.remove(&key);
        } else {
            self.atoms.insert(key, value);
        }
    }

    pub fn atom(&self, key: &CoordinateKey) -> f64 {
        self.atoms.get(key).copied().unwrap_or(0.0)
    }

    pub fn push_interval(&mut self, iv: AxisInterval) {
        if iv.weight != 0.0 && iv.hi > iv.lo {
            self.intervals.push(iv);
        }
    }

    /// Wraps every coordinate into summand `comp` of a direct sum.
    pub fn into_component(self, comp: u16) -> Self {
        let atoms = self
            .atoms
            .into_iter()
            .map(|(k, v)| (CoordinateKey::Sub(comp, Box::new(k)), v))
            .collect();
        let intervals = self
            .intervals
            .into_iter()
            .map(|mut iv| {
                iv.comp = comp;
                iv
            })
            .collect();
        Self { atoms, intervals }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        for (k, v) in &other.atoms {
            let entry = atoms.entry(k.clone()).or_insert(0.0);
            *entry += v;
            if *entry == 0.0 {
                atoms.remove(k);
            }
        }
        let mut intervals = self.intervals.clone();
        intervals.extend_from_slice(&other.intervals);
        Self { atoms, intervals }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        for (k, v) in &other.atoms {
            let entry = atoms.entry(k.clone()).or_insert(0.0);
            *entry -= v;
            if *entry == 0.0 {
                atoms.remove(k);
            }
        }
        let mut intervals = self.intervals.clone();
        intervals.extend(other.intervals.iter().map(|iv| AxisInterval {
            weight: -iv.weight,
            ..*iv
        }));
        Self { atoms, intervals }
    }

    pub fn inner(&self, other: &Self) -> f64 {
        let mut acc = 0.0;
        // Merge-join over the sorted key maps.
        let mut rhs = other.atoms.iter().peekable();
        for (k, v) in &self.atoms {
            while let Some((ko, _)) = rhs.peek() {
                if *ko < k {
                    rhs.next();
                } else {
                    break;
                }
            }
            if let Some((ko, vo)) = rhs.peek() {
                if *ko == k {
                    acc += v * *vo;
                }
            }
        }
        for a in &self.intervals {
            for b in &other.intervals {
                acc += a.weight * b.weight * a.overlap(b);
            }
        }
        acc
    }

    pub fn norm2(&self) -> f64 {
        let mut acc: f64 = self.atoms.values().map(|v| v * v).sum();
        for (i, a) in self.intervals.iter().enumerate() {
            acc += a.weight * a.weight * (a.hi - a.lo);
            for b in &self.intervals[i + 1..] {
                acc += 2.0 * a.weight * b.weight * a.overlap(b);
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.norm2().max(0.0).sqrt()
    }
}

/// Specification of an embedding into Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub enum EmbeddingSpec {
    /// Tree-edge embedding of a free group with weights `j^eps`.
    Tree { eps: f64 },
    /// Coordinate map of a lattice into Euclidean space.
    CoordinateIsometric,
    /// Staircase embedding of `Z` (characteristic function of `[0, x]`).
    Staircase,
    /// Per-axis staircases: isometric `l1 -> l2` after taking square roots
    /// of distances.
    L1ToL2,
    /// Direct sum acting componentwise on a product space.
    DirectSum(Vec<EmbeddingSpec>),
    /// `outer . inner` where `inner` rewrites points (currently coordinate
    /// isometries only, which act as the identity on lattice points).
    Compose {
        outer: Box<EmbeddingSpec>,
        inner: Box<EmbeddingSpec>,
    },
}

impl EmbeddingSpec {
    pub fn tree(eps: f64) -> Result<Self> {
        validate_eps(eps)?;
        Ok(EmbeddingSpec::Tree { eps })
    }

    /// Parses the CLI surface syntax, e.g. `weighted-tree:eps=0.25`,
    /// `staircase`, `sum(iso,iso)`, `compose(l1l2,iso-zn:n=3)`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("sum(") {
            let inner = strip_close(rest, text)?;
            let parts = split_top_level(inner);
            if parts.len() < 2 {
                return Err(Error::Config("sum() needs at least two summands".into()));
            }
            return Ok(EmbeddingSpec::DirectSum(
                parts
                    .iter()
                    .map(|p| EmbeddingSpec::parse(p))
                    .collect::<Result<_>>()?,
            ));
        }
        if let Some(rest) = text.strip_prefix("compose(") {
            let inner = strip_close(rest, text)?;
            let parts = split_top_level(inner);
            if parts.len() != 2 {
                return Err(Error::Config(
                    "compose() needs exactly outer,inner".into(),
                ));
            }
            return Ok(EmbeddingSpec::Compose {
                outer: Box::new(EmbeddingSpec::parse(parts[0])?),
                inner: Box::new(EmbeddingSpec::parse(parts[1])?),
            });
        }
        let (head, params) = match text.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (text, None),
        };
        match head {
            "tree" => {
                let eps = param_value(params, "eps")?.unwrap_or(0.0);
                EmbeddingSpec::tree(eps)
            }
            "weighted-tree" => {
                let eps = param_value(params, "eps")?
                    .ok_or_else(|| Error::Config("weighted-tree needs eps=".into()))?;
                EmbeddingSpec::tree(eps)
            }
            "iso" | "iso-zn" => Ok(EmbeddingSpec::CoordinateIsometric),
            "staircase" => Ok(EmbeddingSpec::Staircase),
            "l1l2" => Ok(EmbeddingSpec::L1ToL2),
            other => Err(Error::Config(format!("unknown embedding {other:?}"))),
        }
    }
}

fn strip_close<'a>(rest: &'a str, whole: &str) -> Result<&'a str> {
    rest.strip_suffix(')')
        .ok_or_else(|| Error::Config(format!("unbalanced parentheses in {whole:?}")))
}

fn split_top_level(text: &str) -> Vec<&str> {
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

fn param_value(params: Option<&str>, key: &str) -> Result<Option<f64>> {
    let Some(params) = params else {
        return Ok(None);
    };
    for kv in params.split(':') {
        if let Some((k, v)) = kv.split_once('=') {
            if k == key {
                return v
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|_| Error::Config(format!("bad value for {key}: {v:?}")));
            }
        }
    }
    Ok(None)
}

impl fmt::Display for EmbeddingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbeddingSpec::Tree { eps } if *eps == 0.0 => write!(f, "tree"),
            EmbeddingSpec::Tree { eps } => write!(f, "weighted-tree:eps={eps}"),
            EmbeddingSpec::CoordinateIsometric => write!(f, "iso"),
            EmbeddingSpec::Staircase => write!(f, "staircase"),
            EmbeddingSpec::L1ToL2 => write!(f, "l1l2"),
            EmbeddingSpec::DirectSum(parts) => {
                write!(f, "sum(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            EmbeddingSpec::Compose { outer, inner } => write!(f, "compose({outer},{inner})"),
        }
    }
}

/// Weight exponents must satisfy `0 <= eps < 1/2` for the generator-step
/// bound (and hence large-scale Lipschitz control) to hold.
pub fn validate_eps(eps: f64) -> Result<()> {
    if !(0.0..0.5).contains(&eps) {
        return Err(Error::Config(format!(
            "tree weight exponent must lie in [0, 1/2), got {eps}"
        )));
    }
    Ok(())
}

/// Evaluates an embedding at a point.
pub fn embed(spec: &EmbeddingSpec, point: &Point) -> Result<HilbertVector> {
    match (spec, point) {
        (EmbeddingSpec::Tree { eps }, Point::Word(s)) => Ok(embed_tree(s, *eps)),
        (EmbeddingSpec::CoordinateIsometric, Point::Lattice(coords)) => {
            let mut v = HilbertVector::zero();
            for (i, &c) in coords.iter().enumerate() {
                v.set_atom(CoordinateKey::Axis(i as u32), c as f64);
            }
            Ok(v)
        }
        (EmbeddingSpec::Staircase, Point::Lattice(coords)) if coords.len() == 1 => {
            Ok(staircase(coords[0] as f64))
        }
        (EmbeddingSpec::L1ToL2, Point::Lattice(coords)) => {
            let mut v = HilbertVector::zero();
            for (i, &c) in coords.iter().enumerate() {
                let mut axis = staircase(c as f64);
                for iv in &mut axis.intervals {
                    iv.axis = i as u32;
                }
                v = v.add(&axis);
            }
            Ok(v)
        }
        (EmbeddingSpec::DirectSum(parts), Point::Tuple(points)) => {
            if parts.len() != points.len() {
                return Err(Error::Domain(format!(
                    "direct sum of {} embeddings applied to a {}-tuple",
                    parts.len(),
                    points.len()
                )));
            }
            let mut out = HilbertVector::zero();
            for (i, (part, p)) in parts.iter().zip(points).enumerate() {
                out = out.add(&embed(part, p)?.into_component(i as u16));
            }
            Ok(out)
        }
        (EmbeddingSpec::Compose { outer, inner }, p) => {
            let q = apply_point_map(inner, p)?;
            embed(outer, &q)
        }
        (spec, point) => Err(Error::Domain(format!(
            "embedding {spec} is not defined on point {point}"
        ))),
    }
}

/// Point-level interpretation of an inner embedding for compositions.
/// Coordinate isometries act as the identity on lattice points.
fn apply_point_map(spec: &EmbeddingSpec, point: &Point) -> Result<Point> {
    match (spec, point) {
        (EmbeddingSpec::CoordinateIsometric, Point::Lattice(_)) => Ok(point.clone()),
        _ => Err(Error::Config(format!(
            "embedding {spec} cannot be used as the inner map of a composition"
        ))),
    }
}

/// The staircase vector `g(x)`: characteristic function of `[0, x]`
/// (or `[x, 0]` for negative `x`) on axis 0.  `|g(x) - g(y)|^2 = |x - y|`.
pub fn staircase(x: f64) -> HilbertVector {
    let mut v = HilbertVector::zero();
    v.push_interval(AxisInterval {
        comp: 0,
        axis: 0,
        lo: x.min(0.0),
        hi: x.max(0.0),
        weight: 1.0,
    });
    v
}

/// The tree-edge embedding: `f(s) = sum_j j^eps . e_j(s)` over the edges of
/// the geodesic `[s, e]`, indexed from `s` toward the identity.
pub fn embed_tree(s: &ReducedWord, eps: f64) -> HilbertVector {
    let k = s.len();
    let mut v = HilbertVector::zero();
    for m in 1..=k {
        let j = (k - m + 1) as f64;
        v.set_atom(
            CoordinateKey::edge(s.prefix(m - 1), s.prefix(m)),
            j.powf(eps),
        );
    }
    v
}

/// Image distance `|f(x) - f(y)|` evaluated through sparse vectors.
pub fn pair_distance(spec: &EmbeddingSpec, x: &Point, y: &Point) -> Result<f64> {
    Ok(embed(spec, x)?.sub(&embed(spec, y)?).norm())
}

/// Precomputed power tables for the tree closed form.
pub struct TreeTables {
    eps: f64,
    /// `pow[j] = j^eps`.
    pow: Vec<f64>,
    /// `sum2[k] = sum_{j<=k} j^(2 eps)`.
    sum2: Vec<f64>,
}

impl TreeTables {
    pub fn new(eps: f64, max_len: usize) -> Result<Self> {
        validate_eps(eps)?;
        let mut pow = Vec::with_capacity(max_len + 1);
        let mut sum2 = Vec::with_capacity(max_len + 1);
        pow.push(0.0);
        sum2.push(0.0);
        for j in 1..=max_len {
            let p = (j as f64).powf(eps);
            pow.push(p);
            sum2.push(sum2[j - 1] + p * p);
        }
        Ok(Self { eps, pow, sum2 })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn max_len(&self) -> usize {
        self.pow.len() - 1
    }

    /// `|f(s) - f(t)|^2` from lengths and common prefix alone.
    pub fn closed_form(&self, ks: usize, kt: usize, p: usize) -> f64 {
        debug_assert!(p <= ks.min(kt));
        debug_assert!(ks.max(kt) <= self.max_len());
        let mut acc = self.sum2[ks - p] + self.sum2[kt - p];
        for m in 1..=p {
            let diff = self.pow[ks - m + 1] - self.pow[kt - m + 1];
            acc += diff * diff;
        }
        acc
    }
}

/// Convenience wrapper when no table reuse is needed.
pub fn weighted_tree_closed_form(ks: usize, kt: usize, p: usize, eps: f64) -> Result<f64> {
    if p > ks.min(kt) {
        return Err(Error::Domain(format!(
            "common prefix {p} longer than a word ({ks}, {kt})"
        )));
    }
    Ok(TreeTables::new(eps, ks.max(kt))?.closed_form(ks, kt, p))
}

/// Upper bound for `|f_eps(s) - f_eps(t)|^2` over generator steps:
/// `1 + eps^2 / (1 - 2 eps)`.  The `1` is the fresh edge at the longer
/// word; the series bounds the telescoped weight differences.
pub fn generator_step_bound(eps: f64) -> Result<f64> {
    validate_eps(eps)?;
    if eps == 0.0 {
        return Ok(1.0);
    }
    Ok(1.0 + eps * eps / (1.0 - 2.0 * eps))
}

/// Lower-bound constant: `|f_eps(s) - f_eps(t)|^2 >= C_eps d(s,t)^(1+2 eps)`
/// with `C_eps = 1 / (2^(2 eps + 1) (2 eps + 1))`.
pub fn compression_lower_constant(eps: f64) -> Result<f64> {
    validate_eps(eps)?;
    Ok(1.0 / (2f64.powf(2.0 * eps + 1.0) * (2.0 * eps + 1.0)))
}
