//! Finite point clouds with explicit metrics.
//!
//! Clouds carry either real coordinates (metric induced from Euclidean
//! space) or an explicit distance matrix.  They serve as counterexample
//! fixtures and as the ingestion target for user-supplied CSV data.

use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum CloudMetric {
    /// Euclidean metric on stored coordinates.
    Coordinates(Vec<Vec<f64>>),
    /// Explicit symmetric distance matrix, row-major.
    Matrix { n: usize, d: Vec<f64> },
}

#[derive(Clone, Debug)]
pub struct PointCloud {
    pub name: String,
    pub labels: Vec<String>,
    metric: CloudMetric,
}

impl PointCloud {
    pub fn from_coordinates(name: &str, labels: Vec<String>, coords: Vec<Vec<f64>>) -> Result<Self> {
        if labels.len() != coords.len() {
            return Err(Error::Config("label/coordinate count mismatch".into()));
        }
        if let Some(dim) = coords.first().map(Vec::len) {
            if coords.iter().any(|c| c.len() != dim) {
                return Err(Error::Config("inconsistent coordinate dimensions".into()));
            }
        }
        Ok(Self {
            name: name.into(),
            labels,
            metric: CloudMetric::Coordinates(coords),
        })
    }

    pub fn from_matrix(name: &str, labels: Vec<String>, n: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::Config(format!(
                "distance matrix has {} entries, expected {}",
                d.len(),
                n * n
            )));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::Config(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                let (a, b) = (d[i * n + j], d[j * n + i]);
                if (a - b).abs() > 1e-12 * (1.0 + a.abs()) {
                    return Err(Error::Config(format!("asymmetric distances at ({i},{j})")));
                }
                if a < 0.0 {
                    return Err(Error::Config(format!("negative distance at ({i},{j})")));
                }
            }
        }
        Ok(Self {
            name: name.into(),
            labels,
            metric: CloudMetric::Matrix { n, d },
        })
    }

    pub fn len(&self) -> usize {
        match &self.metric {
            CloudMetric::Coordinates(c) => c.len(),
            CloudMetric::Matrix { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coordinates(&self, i: usize) -> Option<&[f64]> {
        match &self.metric {
            CloudMetric::Coordinates(c) => c.get(i).map(Vec::as_slice),
            CloudMetric::Matrix { .. } => None,
        }
    }

    pub fn distance(&self, i: usize, j: usize) -> Result<f64> {
        let n = self.len();
        if i >= n || j >= n {
            return Err(Error::Domain(format!(
                "point index out of range: {} points, asked for ({i},{j})",
                n
            )));
        }
        Ok(match &self.metric {
            CloudMetric::Coordinates(c) => c[i]
                .iter()
                .zip(&c[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            CloudMetric::Matrix { n, d } => d[i * n + j],
        })
    }
}
