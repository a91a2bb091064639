//! Gaussian kernel matrices over a ball of a space.
//!
//! Given an embedding `f` and a parameter `k > 0`, the associated kernel is
//! `u_k(x, y) = exp(-|f(x) - f(y)|^2 / k)`.  Because squared image
//! distances are of negative type for the embeddings here, each `u_k` is a
//! positive-definite function; the matrix sampled over a ball lets the
//! checks measure that directly.

use std::io::Write as IoWrite;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::embeddings::{embed, EmbeddingSpec};
use crate::spaces::{Point, Space};
use crate::{Error, Result};

/// A kernel sampled over ball points, with the word distances retained.
#[derive(Clone, Debug)]
pub struct KernelMatrix {
    points: Vec<Point>,
    entries: DMatrix<f64>,
    /// Word distance between points `i` and `j`, row-major.
    word_dist: Vec<u16>,
    /// Smallest squared image distance seen at each word distance.
    min_img2: Vec<f64>,
    /// Largest squared image distance seen at each word distance.
    max_img2: Vec<f64>,
    k: f64,
    /// Entries at word distance `<= truncation` have been zeroed.
    truncation: Option<u32>,
}

impl KernelMatrix {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// The decay rate `kappa = 1 / k` in `exp(-kappa d_img^2)`.
    pub fn kappa(&self) -> f64 {
        1.0 / self.k
    }

    pub fn truncation(&self) -> Option<u32> {
        self.truncation
    }

    pub fn word_dist(&self, i: usize, j: usize) -> u32 {
        self.word_dist[i * self.n() + j] as u32
    }

    /// Largest word distance realized between sampled points.
    pub fn max_word_dist(&self) -> u32 {
        self.min_img2.len().saturating_sub(1) as u32
    }

    /// Smallest squared image distance over pairs at word distance `d`,
    /// or None when the ball realizes no such pair.
    pub fn min_img2_at(&self, d: u32) -> Option<f64> {
        self.min_img2
            .get(d as usize)
            .copied()
            .filter(|v| v.is_finite())
    }

    pub fn max_img2_at(&self, d: u32) -> Option<f64> {
        self.max_img2
            .get(d as usize)
            .copied()
            .filter(|v| v.is_finite())
    }

    /// A copy with entries at word distance `<= cutoff` replaced by zero
    /// (the diagonal included).  What survives is the far part of the
    /// kernel, whose multiplier norm the tail estimates control.
    pub fn truncated(&self, cutoff: u32) -> Self {
        let n = self.n();
        let mut entries = self.entries.clone();
        for i in 0..n {
            for j in 0..n {
                if self.word_dist[i * n + j] as u32 <= cutoff {
                    entries[(i, j)] = 0.0;
                }
            }
        }
        Self {
            entries,
            truncation: Some(cutoff),
            ..self.clone()
        }
    }

    /// Largest absolute entry at word distance greater than `d`.
    pub fn sup_beyond(&self, d: u32) -> f64 {
        let n = self.n();
        let mut sup = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if self.word_dist[i * n + j] as u32 > d {
                    sup = sup.max(self.entries[(i, j)].abs());
                }
            }
        }
        sup
    }

    /// Writes the upper triangle (diagonal included) as `i,j,value`.
    pub fn write_csv(&self, mut out: impl IoWrite) -> std::io::Result<()> {
        writeln!(out, "i,j,value")?;
        for i in 0..self.n() {
            for j in i..self.n() {
                writeln!(out, "{i},{j},{:.12}", self.entries[(i, j)])?;
            }
        }
        Ok(())
    }
}

/// Builds `u_k` over the ball of the given radius.
pub fn gaussian_kernel(
    space: &Space,
    spec: &EmbeddingSpec,
    radius: u32,
    k: f64,
    ball_cap: u64,
) -> Result<KernelMatrix> {
    if !(k > 0.0) {
        return Err(Error::Config(format!(
            "kernel parameter must be positive, got {k}"
        )));
    }
    let ball = space.ball(radius, ball_cap)?;
    let points = ball.points;
    let n = points.len();
    let mut vectors = Vec::with_capacity(n);
    for p in &points {
        vectors.push(embed(spec, p)?);
    }
    let mut entries = vec![0.0f64; n * n];
    let mut word_dist = vec![0u16; n * n];
    let rows: Vec<(Vec<f64>, Vec<u16>, Vec<f64>, Vec<f64>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut erow = vec![0.0f64; n];
            let mut drow = vec![0u16; n];
            let mut min2 = Vec::new();
            let mut max2 = Vec::new();
            for j in 0..n {
                let d = space
                    .distance(&points[i], &points[j])
                    .expect("ball points share the space kind");
                let di = d.round() as usize;
                debug_assert!(di <= u16::MAX as usize);
                let img2 = vectors[i].sub(&vectors[j]).norm2().max(0.0);
                erow[j] = (-img2 / k).exp();
                drow[j] = di as u16;
                if di >= min2.len() {
                    min2.resize(di + 1, f64::INFINITY);
                    max2.resize(di + 1, f64::NEG_INFINITY);
                }
                if img2 < min2[di] {
                    min2[di] = img2;
                }
                if img2 > max2[di] {
                    max2[di] = img2;
                }
            }
            (erow, drow, min2, max2)
        })
        .collect();
    let mut min_img2 = Vec::new();
    let mut max_img2 = Vec::new();
    for (i, (erow, drow, min2, max2)) in rows.into_iter().enumerate() {
        entries[i * n..(i + 1) * n].copy_from_slice(&erow);
        word_dist[i * n..(i + 1) * n].copy_from_slice(&drow);
        if min2.len() > min_img2.len() {
            min_img2.resize(min2.len(), f64::INFINITY);
            max_img2.resize(max2.len(), f64::NEG_INFINITY);
        }
        for (d, v) in min2.iter().enumerate() {
            if *v < min_img2[d] {
                min_img2[d] = *v;
            }
        }
        for (d, v) in max2.iter().enumerate() {
            if *v > max_img2[d] {
                max_img2[d] = *v;
            }
        }
    }
    Ok(KernelMatrix {
        points,
        entries: DMatrix::from_row_slice(n, n, &entries),
        word_dist,
        min_img2,
        max_img2,
        k,
        truncation: None,
    })
}
