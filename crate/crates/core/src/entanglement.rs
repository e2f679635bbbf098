//! Structure of multi-screen arrangements across screen bipartitions: Schmidt
//! decompositions of pure states, full separability, and exact-product tests
//! for general arrangements.
//!
//! Mixed-state separability in the convex sense is not decided here; for mixed
//! arrangements only exact product structure is reported.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::isa::ExperimentalArrangement;
use crate::tensor::{singular_value_decomposition, tensor_product, ComplexMatrix, ScreenConfiguration};
use crate::tolerance;
use crate::transforms::{permute_screens, remove_screens, BasisTransformation};

/// Largest number of screens accepted by [`schmidt_rank_profile`].
pub const PROFILE_SCREEN_LIMIT: usize = 12;

/// A split of the screens `1..=n` into two nonempty complementary sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    /// `left` holds 1-based screen positions; the right side is its complement
    /// in `1..=screens`.
    pub fn new(left: &[usize], screens: usize) -> Result<Self> {
        let set: BTreeSet<usize> = left.iter().copied().collect();
        if set.len() != left.len() {
            return Err(Error::InvalidBipartition("repeated screen position".into()));
        }
        if let Some(&bad) = set.iter().find(|&&p| p == 0 || p > screens) {
            return Err(Error::InvalidBipartition(format!(
                "screen {bad} is outside 1..={screens}"
            )));
        }
        if set.is_empty() || set.len() == screens {
            return Err(Error::InvalidBipartition("both sides must be nonempty".into()));
        }
        let right = (1..=screens).filter(|p| !set.contains(p)).collect();
        Ok(Self {
            left: set.into_iter().collect(),
            right,
        })
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn screens(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// Left screens followed by right screens.
    pub fn order(&self) -> Vec<usize> {
        self.left.iter().chain(&self.right).copied().collect()
    }

    /// Same split regardless of which side is called left.
    pub fn is_equivalent(&self, other: &Self) -> bool {
        self == other || (self.left == other.right && self.right == other.left)
    }

    fn check_for(&self, shape: &ScreenConfiguration) -> Result<()> {
        if self.screens() != shape.screens() {
            return Err(Error::InvalidBipartition(format!(
                "cut covers {} screens but the configuration has {}",
                self.screens(),
                shape.screens()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{{{}}}|{{{}}}", join(&self.left), join(&self.right))
    }
}

/// `|ψ⟩ = Σ_i c_i |u_i⟩ ⊗ |v_i⟩` across a cut.
#[derive(Clone, Debug)]
pub struct SchmidtResult {
    /// Coefficients above the rank threshold, descending.
    pub coefficients: Vec<f64>,
    /// Vectors on the left screens, in left-screen order.
    pub left_vectors: Vec<Vec<Complex64>>,
    /// Vectors on the right screens, in right-screen order.
    pub right_vectors: Vec<Vec<Complex64>>,
    pub rank: usize,
    shape: ScreenConfiguration,
    cut: Bipartition,
}

impl SchmidtResult {
    pub fn cut(&self) -> &Bipartition {
        &self.cut
    }

    /// `Σ c_i |u_i⟩ ⊗ |v_i⟩` mapped back to the original screen order.
    pub fn reconstruct(&self) -> Result<Vec<Complex64>> {
        let dr = self.right_vectors.first().map_or(1, Vec::len);
        let dl = self.left_vectors.first().map_or(1, Vec::len);
        let mut permuted = vec![Complex64::new(0.0, 0.0); dl * dr];
        for ((c, u), v) in self
            .coefficients
            .iter()
            .zip(&self.left_vectors)
            .zip(&self.right_vectors)
        {
            for (a, ua) in u.iter().enumerate() {
                for (b, vb) in v.iter().enumerate() {
                    permuted[a * dr + b] += ua * vb * *c;
                }
            }
        }
        let perm = BasisTransformation::screen_permutation(&self.shape, &self.cut.order())?;
        perm.inverse().apply_to_state(&permuted)
    }
}

fn check_state(state: &[Complex64], shape: &ScreenConfiguration) -> Result<()> {
    if state.len() != shape.dimension() {
        return Err(Error::DimensionMismatch {
            expected: shape.dimension(),
            found: state.len(),
        });
    }
    let norm = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > tolerance::NORMALIZATION {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// Schmidt decomposition of a pure state across `cut`.
pub fn schmidt_decompose(state: &[Complex64], shape: &ScreenConfiguration, cut: &Bipartition) -> Result<SchmidtResult> {
    check_state(state, shape)?;
    cut.check_for(shape)?;
    let perm = BasisTransformation::screen_permutation(shape, &cut.order())?;
    let permuted = perm.apply_to_state(state)?;
    let counts = shape.detector_counts();
    let dl: usize = cut.left.iter().map(|&p| counts[p - 1]).product();
    let dr: usize = cut.right.iter().map(|&p| counts[p - 1]).product();
    let svd = singular_value_decomposition(&ComplexMatrix::from_vec(dl, dr, permuted)?);
    let rank = svd.rank(tolerance::SCHMIDT_RANK);
    // m = U Σ V†, so m[a][b] = Σ_i σ_i U[a,i] conj(V[b,i]).
    Ok(SchmidtResult {
        coefficients: svd.singular_values[..rank].to_vec(),
        left_vectors: (0..rank).map(|i| svd.u.column(i)).collect(),
        right_vectors: (0..rank)
            .map(|i| svd.v.column(i).into_iter().map(|z| z.conj()).collect())
            .collect(),
        rank,
        shape: shape.clone(),
        cut: cut.clone(),
    })
}

/// Outcome of [`is_fully_separable_pure`].
#[derive(Clone, Debug)]
pub struct Separability {
    pub fully_separable: bool,
    /// One vector per screen when fully separable; their product reconstructs
    /// the state.
    pub factors: Option<Vec<Vec<Complex64>>>,
}

/// Peels off one screen at a time with the cuts `{1}|{2..n}`, `{2}|{3..n}`, …;
/// the state is fully separable iff every cut has Schmidt rank one.
pub fn is_fully_separable_pure(state: &[Complex64], shape: &ScreenConfiguration) -> Result<Separability> {
    check_state(state, shape)?;
    let counts = shape.detector_counts();
    let mut rest = state.to_vec();
    let mut factors = Vec::with_capacity(counts.len());
    for (j, &d) in counts.iter().enumerate().take(counts.len() - 1) {
        let tail: usize = counts[j + 1..].iter().product();
        let svd = singular_value_decomposition(&ComplexMatrix::from_vec(d, tail, rest)?);
        if svd.rank(tolerance::SCHMIDT_RANK) > 1 {
            return Ok(Separability {
                fully_separable: false,
                factors: None,
            });
        }
        factors.push(svd.u.column(0));
        let sigma = svd.singular_values[0];
        rest = svd.v.column(0).into_iter().map(|z| z.conj() * sigma).collect();
    }
    factors.push(rest);
    Ok(Separability {
        fully_separable: true,
        factors: Some(factors),
    })
}

/// `v_1 ⊗ … ⊗ v_n`
pub fn product_state(factors: &[Vec<Complex64>]) -> Vec<Complex64> {
    factors.iter().fold(vec![Complex64::new(1.0, 0.0)], |acc, f| {
        acc.iter().flat_map(|a| f.iter().map(move |b| a * b)).collect()
    })
}

/// Outcome of [`is_product_across`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductTest {
    pub is_product: bool,
    /// `‖α − ρ_L ⊗ ρ_R‖_max` with screens reordered to the cut.
    pub residual: f64,
}

/// Compares an arrangement with the product of its two marginals across `cut`.
pub fn is_product_across(ea: &ExperimentalArrangement, cut: &Bipartition) -> Result<ProductTest> {
    cut.check_for(ea.shape())?;
    let left = remove_screens(ea, cut.right())?;
    let right = remove_screens(ea, cut.left())?;
    let reordered = permute_screens(ea, &cut.order())?;
    let product = tensor_product(left.alpha(), right.alpha())?;
    let residual = reordered.alpha().matrix().max_abs_diff(product.matrix())?;
    Ok(ProductTest {
        is_product: residual <= tolerance::PRODUCT,
        residual,
    })
}

/// Schmidt ranks over the single-screen cuts `{j}|rest` followed by the
/// contiguous cuts `{1..k}|{k+1..n}` that are not already listed.
pub fn schmidt_rank_profile(state: &[Complex64], shape: &ScreenConfiguration) -> Result<Vec<(Bipartition, usize)>> {
    let n = shape.screens();
    if n > PROFILE_SCREEN_LIMIT {
        return Err(Error::TooManyScreens {
            screens: n,
            limit: PROFILE_SCREEN_LIMIT,
        });
    }
    check_state(state, shape)?;
    let mut cuts: Vec<Bipartition> = Vec::new();
    let candidates = (1..=n)
        .map(|j| vec![j])
        .chain((2..n.saturating_sub(1)).map(|k| (1..=k).collect()));
    for left in candidates {
        if n < 2 {
            break;
        }
        let cut = Bipartition::new(&left, n)?;
        if !cuts.iter().any(|c| c.is_equivalent(&cut)) {
            cuts.push(cut);
        }
    }
    cuts.into_iter()
        .map(|cut| {
            let rank = schmidt_decompose(state, shape, &cut)?.rank;
            Ok((cut, rank))
        })
        .collect()
}
