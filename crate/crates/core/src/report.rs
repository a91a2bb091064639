//! Structured results for geometric checks.
//!
//! Every check (uniform embedding, quasi-geodesic, quasi-isometry, cocycle
//! identity, positive definiteness, ...) reports through the same shape so
//! the command-line tool can serialize them uniformly and scripts can
//! branch on the verdict without parsing prose.

use std::collections::BTreeMap;

use serde::Serialize;

/// Outcome of a check over the sampled range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// The property held everywhere it was tested.
    Pass,
    /// A concrete witness violated the property.
    Fail,
    /// The data was insufficient to decide (for example, a window too
    /// short to fit constants).
    Inconclusive,
}

/// A check result: verdict, fitted constants, and a human-readable trail.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    /// Which check produced this report, e.g. `"uniform-embedding"`.
    pub check: String,
    pub verdict: Verdict,
    /// Named constants the check measured or fitted (`C`, `D`, `lambda`,
    /// `delta`, slopes, residuals).  BTreeMap keeps serialization stable.
    pub constants: BTreeMap<String, f64>,
    /// Witnesses and notes; each entry is one line of explanation.
    pub details: Vec<String>,
    /// Range of distances (or radii) the check actually examined.
    pub tested_range: Option<(f64, f64)>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, verdict: Verdict) -> Self {
        Self {
            check: check.into(),
            verdict,
            constants: BTreeMap::new(),
            details: Vec::new(),
            tested_range: None,
        }
    }

    pub fn with_constant(mut self, name: impl Into<String>, value: f64) -> Self {
        self.constants.insert(name.into(), value);
        self
    }

    pub fn with_detail(mut self, line: impl Into<String>) -> Self {
        self.details.push(line.into());
        self
    }

    pub fn with_range(mut self, lo: f64, hi: f64) -> Self {
        self.tested_range = Some((lo, hi));
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants.get(name).copied()
    }
}
