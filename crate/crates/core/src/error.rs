//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("image dimensions do not match: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),

    #[error("image too small: need at least {need}x{need}, got {width}x{height}")]
    ImageTooSmall { need: u32, width: u32, height: u32 },

    #[error("degenerate range: lo {lo} >= hi {hi}")]
    DegenerateRange { lo: u32, hi: u32 },

    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),

    #[error("chaotic domain violation: {value} outside [{min}, {max}] for {map}")]
    ChaoticDomain {
        map: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),

    #[error("combinatorial budget exceeded: {required} candidates > budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("malformed PGM: {0}")]
    MalformedPgm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),
}

pub type Result<T> = std::result::Result<T, Error>;
