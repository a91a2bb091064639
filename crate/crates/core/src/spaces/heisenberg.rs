//! The discrete Heisenberg group and its word metric.
//!
//! Elements are integer triples `(x, y, z)` with multiplication
//! `(x, y, z) (x', y', z') = (x + x', y + y', z + z' + x y')`, generated by
//! `a = (1, 0, 0)` and `b = (0, 1, 0)`.  The commutator `c = [a, b]` is the
//! central element `(0, 0, 1)`; powers of `c` are heavily distorted (their
//! word length grows like the square root of the exponent), which is what
//! makes this group the standard counterexample fixture downstream.
//!
//! The word metric has no usable closed form, so lengths come from a
//! breadth-first table over a ball of configurable radius.

use std::collections::HashMap;
use std::collections::VecDeque;

use crate::{Error, Result};

pub type HeisPoint = [i64; 3];

pub const IDENTITY: HeisPoint = [0, 0, 0];

/// The four standard generators `a, a^-1, b, b^-1`.
pub const GENERATORS: [HeisPoint; 4] = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]];

pub fn mul(p: HeisPoint, q: HeisPoint) -> HeisPoint {
    [p[0] + q[0], p[1] + q[1], p[2] + q[2] + p[0] * q[1]]
}

pub fn inverse(p: HeisPoint) -> HeisPoint {
    [-p[0], -p[1], p[0] * p[1] - p[2]]
}

/// The central generator `c = a b a^-1 b^-1 = (0, 0, 1)`.
pub fn central() -> HeisPoint {
    let [a, b] = [GENERATORS[0], GENERATORS[2]];
    mul(mul(mul(a, b), inverse(a)), inverse(b))
}

/// `c^m = (0, 0, m)`.
pub fn central_power(m: i64) -> HeisPoint {
    [0, 0, m]
}

/// Word lengths on a ball, computed once by breadth-first search.
#[derive(Clone, Debug)]
pub struct LengthTable {
    radius: u32,
    lengths: HashMap<HeisPoint, u32>,
    sphere_sizes: Vec<u64>,
    /// Points in BFS order (by length, then discovery order).
    points: Vec<HeisPoint>,
}

pub const DEFAULT_TABLE_RADIUS: u32 = 14;

impl LengthTable {
    /// Runs BFS from the identity out to `radius`.
    ///
    /// `cap` bounds the number of distinct elements visited; the ball of the
    /// Heisenberg group grows like `radius^4`, so the default radius stays in
    /// the tens of thousands of points.
    pub fn compute(radius: u32, cap: u64) -> Result<Self> {
        // Polynomial growth estimate, used only to fail fast on absurd radii.
        let predicted = (radius as u64 + 1).pow(4) / 2;
        if predicted > cap {
            return Err(Error::Capacity { predicted, cap });
        }
        let mut lengths = HashMap::new();
        let mut points = Vec::new();
        let mut sphere_sizes = vec![0u64; radius as usize + 1];
        let mut queue = VecDeque::new();
        lengths.insert(IDENTITY, 0);
        points.push(IDENTITY);
        sphere_sizes[0] = 1;
        queue.push_back(IDENTITY);
        while let Some(p) = queue.pop_front() {
            let len = lengths[&p];
            if len == radius {
                continue;
            }
            for g in GENERATORS {
                let q = mul(p, g);
                if let std::collections::hash_map::Entry::Vacant(slot) = lengths.entry(q) {
                    slot.insert(len + 1);
                    sphere_sizes[len as usize + 1] += 1;
                    points.push(q);
                    queue.push_back(q);
                    if points.len() as u64 > cap {
                        return Err(Error::Capacity {
                            predicted: points.len() as u64,
                            cap,
                        });
                    }
                }
            }
        }
        Ok(Self {
            radius,
            lengths,
            sphere_sizes,
            points,
        })
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn sphere_sizes(&self) -> &[u64] {
        &self.sphere_sizes
    }

    pub fn points(&self) -> &[HeisPoint] {
        &self.points
    }

    /// Word length of `p`, or an out-of-range error if `p` lies outside the
    /// table ball.  The reported lower bound on the required radius uses
    /// `|g| >= |x| + |y|`: every generator step moves one of the first two
    /// coordinates by one.
    pub fn length(&self, p: HeisPoint) -> Result<u32> {
        self.lengths.get(&p).copied().ok_or_else(|| {
            let coord_bound = (p[0].unsigned_abs() + p[1].unsigned_abs()) as u32;
            Error::OutOfRange {
                required: coord_bound.max(self.radius + 1),
                cap: self.radius,
            }
        })
    }

    /// Left-invariant distance `d(p, q) = |p^-1 q|`.
    pub fn distance(&self, p: HeisPoint, q: HeisPoint) -> Result<u32> {
        self.length(mul(inverse(p), q))
    }

    /// Word lengths of the central powers `c^1 .. c^max` that fit in the
    /// table, in order.
    pub fn central_lengths(&self, max: i64) -> Vec<(i64, u32)> {
        (1..=max)
            .map_while(|m| self.length(central_power(m)).ok().map(|l| (m, l)))
            .collect()
    }
}
