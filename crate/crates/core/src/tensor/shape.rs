use std::fmt;

use crate::error::{Error, Result};

/// Largest total dimension accepted unless a caller asks for another cap.
pub const DEFAULT_DIMENSION_CAP: usize = 4096;

/// An ordered list of detector counts, one per screen: the factorization
/// `C^{i_1} ⊗ … ⊗ C^{i_n}`.
///
/// Multi-indices are linearized in mixed radix with the leftmost screen as the
/// most significant digit, so `(k_1, …, k_n)` maps to
/// `Σ_j (k_j − 1) · Π_{l>j} i_l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScreenConfiguration {
    detector_counts: Vec<usize>,
    dimension: usize,
}

impl ScreenConfiguration {
    pub fn new(detector_counts: Vec<usize>) -> Result<Self> {
        Self::with_cap(detector_counts, DEFAULT_DIMENSION_CAP)
    }

    pub fn with_cap(detector_counts: Vec<usize>, cap: usize) -> Result<Self> {
        if detector_counts.is_empty() {
            return Err(Error::InvalidShape("at least one screen is required".into()));
        }
        if let Some(pos) = detector_counts.iter().position(|&c| c == 0) {
            return Err(Error::InvalidShape(format!("screen {} has no detectors", pos + 1)));
        }
        let requested = detector_counts
            .iter()
            .try_fold(1u128, |acc, &c| acc.checked_mul(c as u128))
            .unwrap_or(u128::MAX);
        if requested > cap as u128 {
            return Err(Error::CapacityExceeded { requested, cap });
        }
        Ok(Self {
            detector_counts,
            dimension: requested as usize,
        })
    }

    /// `screens` screens with `detectors` detectors each.
    pub fn uniform(screens: usize, detectors: usize) -> Result<Self> {
        Self::new(vec![detectors; screens])
    }

    pub fn detector_counts(&self) -> &[usize] {
        &self.detector_counts
    }

    pub fn screens(&self) -> usize {
        self.detector_counts.len()
    }

    /// Total number of powers, the degree of complexity.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Concatenation `self ⊗ other`, checked against `cap`.
    pub fn concat(&self, other: &Self, cap: usize) -> Result<Self> {
        let mut counts = self.detector_counts.clone();
        counts.extend_from_slice(&other.detector_counts);
        Self::with_cap(counts, cap)
    }

    /// Place values of each screen in the linearization.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.detector_counts.len()];
        for j in (0..self.detector_counts.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * self.detector_counts[j + 1];
        }
        strides
    }

    pub fn contains(&self, index: &MultiIndex) -> bool {
        index.0.len() == self.detector_counts.len()
            && index
                .0
                .iter()
                .zip(&self.detector_counts)
                .all(|(&k, &count)| k >= 1 && k <= count)
    }

    /// 0-based linear position of a 1-based multi-index.
    pub fn flatten(&self, index: &MultiIndex) -> Result<usize> {
        if !self.contains(index) {
            return Err(Error::IndexOutOfRange {
                index: index.to_string(),
                shape: self.to_string(),
            });
        }
        Ok(index
            .0
            .iter()
            .zip(&self.detector_counts)
            .fold(0, |acc, (&k, &count)| acc * count + (k - 1)))
    }

    /// Inverse of [`flatten`](Self::flatten).
    ///
    /// # Panics
    /// If `linear >= self.dimension()`.
    pub fn unflatten(&self, linear: usize) -> MultiIndex {
        assert!(linear < self.dimension, "linear index out of range");
        let mut rest = linear;
        let mut digits = vec![0; self.detector_counts.len()];
        for (digit, &count) in digits.iter_mut().zip(&self.detector_counts).rev() {
            *digit = rest % count + 1;
            rest /= count;
        }
        MultiIndex(digits)
    }

    /// All multi-indices in linear order.
    pub fn multi_indices(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.dimension).map(move |i| self.unflatten(i))
    }

    /// Checks a 1-based screen position.
    pub(crate) fn check_position(&self, position: usize) -> Result<()> {
        if position == 0 || position > self.screens() {
            return Err(Error::InvalidScreen {
                position,
                screens: self.screens(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for ScreenConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (j, c) in self.detector_counts.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// One 1-based detector index per screen.
///
/// The derived ordering is lexicographic, which coincides with the linear
/// order for indices of the same configuration.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>) -> Self {
        Self(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Builds a 1-based index from 0/1 style labels, as in `|0101⟩`.
    pub fn from_zero_based(labels: &[usize]) -> Self {
        Self(labels.iter().map(|k| k + 1).collect())
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, k) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}
