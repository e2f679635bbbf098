//! Experimental arrangements as Hermitian, trace-one tensors over multi-screen
//! detector spaces.
//!
//! An arrangement fixes a factorization into screens (each with a number of
//! detector places) and assigns to every product-basis projector, a *power*,
//! its *potentia*: the diagonal entry of the tensor. This crate provides the
//! tensor algebra, validated domain types, basis and factorization changes,
//! Schmidt/product structure across screen bipartitions, SVG diagrams, and a
//! file format plus command-line front end.
//!
//! ```
//! use multiscreen::isa::ExperimentalArrangement;
//! use multiscreen::tensor::{MultiIndex, ScreenConfiguration};
//! use multiscreen::transforms::remove_screen;
//!
//! let shape = ScreenConfiguration::uniform(4, 2)?;
//! let four = ExperimentalArrangement::diagonal_mixture(
//!     shape,
//!     &[(MultiIndex::from_zero_based(&[0, 1, 0, 1]), 0.5), (MultiIndex::from_zero_based(&[1, 1, 1, 1]), 0.5)],
//! )?;
//! let three = remove_screen(&four, 4)?;
//! assert_eq!(three.potentia(&MultiIndex::from_zero_based(&[0, 1, 0]))?, 0.5);
//! # Ok::<(), multiscreen::Error>(())
//! ```

pub mod cli;
pub mod entanglement;
mod error;
pub mod format;
pub mod isa;
pub mod random;
pub mod tensor;
pub mod tolerance;
pub mod transforms;
pub mod viz;

pub use error::{Error, ErrorCategory, Result};
