//! Dense complex multilinear algebra over factorized detector spaces.
//!
//! Operators are stored as `N × N` row-major matrices, where `N` is the product
//! of the detector counts and multi-indices are linearized with the leftmost
//! screen as the most significant digit. Indices are 1-based at every public
//! boundary and 0-based internally.

mod eigen;
mod matrix;
mod operator;
mod shape;
mod svd;

pub use eigen::{hermitian_eigendecomposition, HermitianEigen};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use operator::{tensor_product, tensor_product_with_cap, DenseOperatorTensor};
pub use shape::{MultiIndex, ScreenConfiguration, DEFAULT_DIMENSION_CAP};
pub use svd::{singular_value_decomposition, Svd};
