//! Finite-scale geometry of finitely generated groups.
//!
//! This crate computes, on finite balls of Cayley graphs, the quantities that
//! control how well a group embeds into Hilbert space:
//!
//! * [`spaces`] enumerates balls and evaluates word metrics for free groups,
//!   integer lattices, the discrete Heisenberg group, metric products and
//!   finite point-cloud fixtures.
//! * [`embeddings`] evaluates explicit embeddings into `l2` (tree-edge
//!   embeddings of free groups with polynomial weights, staircase embeddings
//!   of the line, `l1 -> l2` pipelines, direct sums and compositions) as
//!   sparse vectors with exact coefficient bookkeeping.
//! * [`compression`] measures compression profiles (the smallest and largest
//!   image distance per source distance) over enumerated or sampled pair
//!   sets, fits asymptotic exponents on log-log windows, and checks the
//!   product and composition rules those exponents obey.
//! * [`kernels`] builds Gaussian (Schoenberg) kernel matrices from an
//!   embedding, verifies positive semidefiniteness, runs Schur row-sum tests
//!   with their analytic majorants, and approximates kernels by finite-width
//!   truncation of the operator square root.
//! * [`coarse`] classifies finite map samples (uniform embedding,
//!   large-scale Lipschitz, quasi-isometry), extracts coarse subchains from
//!   quasi-geodesic chains, and derives quasi-isometry constants from
//!   chain data.
//! * [`equivariant`] realizes the edge cocycle of a free group acting on its
//!   Cayley tree and measures the compression of the associated affine
//!   action.
//!
//! Everything here is desk-scale and honest about it: profiles, fits and
//! verdicts always carry the ball radius, pair counts and strategy they were
//! computed from, and checks report `fail`/`inconclusive` rather than
//! extrapolating beyond the evaluated range.

pub mod coarse;
pub mod compression;
pub mod embeddings;
pub mod equivariant;
mod error;
pub mod fixtures;
pub mod kernels;
pub mod report;
pub mod spaces;

pub use error::{Error, Result};
