use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A letter outside the alphabet of the ambient free group.
    #[error("invalid letter {letter:?} for a free group of rank {rank}")]
    InvalidLetter { letter: String, rank: usize },

    /// A lookup left the precomputed region of a metric table.
    #[error("point outside the precomputed ball: requires radius >= {required}, table radius is {cap}")]
    OutOfRange { required: u32, cap: u32 },

    /// An enumeration would exceed the configured capacity.
    #[error("capacity exceeded: would touch {predicted} points, cap is {cap}")]
    Capacity { predicted: u64, cap: u64 },

    /// Invalid configuration (parse errors, incompatible arguments).
    #[error("configuration error: {0}")]
    Config(String),

    /// A value outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A fit or estimate could not be produced from the data given.
    #[error("estimation error: {0}")]
    Estimation(String),

    /// The decay hypothesis of a Schur analysis fails on the evaluated range.
    #[error("decay hypothesis violated at r = {r}: min image distance^2 {lhs} < r^(1+eps) = {rhs}")]
    Hypothesis { r: u32, lhs: f64, rhs: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
