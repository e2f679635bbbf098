//! Numerical tolerances shared by every module.
//!
//! All checks are absolute and measured in the entrywise max-norm unless a
//! function states otherwise.

/// Hermiticity of operators and unitarity of basis transformations.
pub const STRUCTURE: f64 = 1e-10;

/// Unit trace of an arrangement and normalization of state vectors.
pub const NORMALIZATION: f64 = 1e-10;

/// Smallest eigenvalue accepted as nonnegative.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

/// Eigendecomposition and SVD reconstruction residual.
pub const RECONSTRUCTION: f64 = 1e-9;

/// Idempotence/self-adjointness of projectors, commutators, purity, and
/// imaginary parts of diagonal entries.
pub const PROJECTOR: f64 = 1e-9;

/// Orthogonal additivity of valuations.
pub const ADDITIVITY: f64 = 1e-8;

/// Schmidt coefficients above this count toward the rank.
pub const SCHMIDT_RANK: f64 = 1e-9;

/// Residual below which an arrangement counts as a product across a cut.
pub const PRODUCT: f64 = 1e-8;

/// Normalization accepted when loading state files; states are renormalized
/// exactly after the check.
pub const STATE_FILE_NORM: f64 = 1e-8;

/// Agreement between marginal potentia and sums of joint potentia.
pub const MARGINAL: f64 = 1e-12;

/// Spectrum agreement under basis changes.
pub const SPECTRUM: f64 = 1e-9;
