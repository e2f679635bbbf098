use thiserror::Error;

use crate::isa::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure classes, used to pick process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorCategory {
    Validation,
    Dimension,
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("total dimension {requested} exceeds the configured cap of {cap}")]
    CapacityExceeded { requested: u128, cap: usize },

    #[error("invalid screen configuration: {0}")]
    InvalidShape(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("degree mismatch: {expected} powers versus {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("multi-index {index} is out of range for configuration {shape}")]
    IndexOutOfRange { index: String, shape: String },

    #[error("screen position {position} is invalid for {screens} screen(s)")]
    InvalidScreen { position: usize, screens: usize },

    #[error("cannot remove the only screen of an arrangement")]
    SingleScreen,

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation of u*u^dagger from I is {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("operator is not a projector (max deviation {deviation:e})")]
    NotProjector { deviation: f64 },

    #[error("projectors {first} and {second} are not orthogonal (overlap {overlap:e})")]
    NotOrthogonal { first: usize, second: usize, overlap: f64 },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    #[error("invalid experimental arrangement: {0}")]
    InvalidArrangement(ValidationReport),

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("{screens} screens exceed the cut-profile limit of {limit}")]
    TooManyScreens { screens: usize, limit: usize },

    #[error("invalid render options: {0}")]
    InvalidOptions(String),
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::CapacityExceeded { .. }
            | Error::InvalidShape(_)
            | Error::DimensionMismatch { .. }
            | Error::ShapeMismatch { .. }
            | Error::DegreeMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::InvalidScreen { .. }
            | Error::SingleScreen
            | Error::InvalidBipartition(_)
            | Error::TooManyScreens { .. } => ErrorCategory::Dimension,
            Error::NotHermitian { .. }
            | Error::NotUnitary { .. }
            | Error::NotProjector { .. }
            | Error::NotOrthogonal { .. } => ErrorCategory::Numeric,
            Error::NotNormalized { .. }
            | Error::InvalidMixture(_)
            | Error::InvalidOptions(_)
            | Error::InvalidArrangement(_) => ErrorCategory::Validation,
        }
    }
}
