//! Changes of basis, refactorizations, and screen removal/extension, with
//! executable checks of basis and factorization invariance.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::isa::ExperimentalArrangement;
use crate::random::{random_state, seeded};
use crate::tensor::{tensor_product, ComplexMatrix, MultiIndex, ScreenConfiguration};
use crate::tolerance;

/// Unitary `λ` relating the product basis of `source` to that of `target`:
/// `|k⟩ = Σ_κ λ_κ^k |κ⟩`, stored as the `N × N` matrix with rows indexed by
/// the target multi-index `κ` and columns by the source multi-index `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisTransformation {
    source: ScreenConfiguration,
    target: ScreenConfiguration,
    lambda: ComplexMatrix,
}

impl BasisTransformation {
    pub fn new(source: ScreenConfiguration, target: ScreenConfiguration, lambda: ComplexMatrix) -> Result<Self> {
        let n = source.dimension();
        if target.dimension() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: target.dimension(),
            });
        }
        if lambda.rows() != n || lambda.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: lambda.rows().max(lambda.cols()),
            });
        }
        let deviation = lambda.unitarity_deviation();
        if !lambda.is_finite() || deviation > tolerance::STRUCTURE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { source, target, lambda })
    }

    /// Identity `λ` between two factorizations of the same dimension.
    pub fn identity(source: ScreenConfiguration, target: ScreenConfiguration) -> Result<Self> {
        let n = source.dimension();
        Self::new(source, target, ComplexMatrix::identity(n))
    }

    /// Reorders screens: screen `j` of the target is screen `order[j]`
    /// (1-based) of the source.
    pub fn screen_permutation(source: &ScreenConfiguration, order: &[usize]) -> Result<Self> {
        let n = source.screens();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: order.len(),
            });
        }
        for &p in order {
            source.check_position(p)?;
            if std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::InvalidShape(format!("screen {p} repeated in permutation")));
            }
        }
        let counts = source.detector_counts();
        let target = ScreenConfiguration::with_cap(order.iter().map(|&p| counts[p - 1]).collect(), usize::MAX)?;
        let dim = source.dimension();
        let mut lambda = ComplexMatrix::zeros(dim, dim);
        for (col, k) in source.multi_indices().enumerate() {
            let kappa = MultiIndex(order.iter().map(|&p| k.0[p - 1]).collect());
            let row = target.flatten(&kappa)?;
            lambda[(row, col)] = Complex64::new(1.0, 0.0);
        }
        Self::new(source.clone(), target, lambda)
    }

    /// `u_1 ⊗ … ⊗ u_n` acting screen by screen, keeping the factorization.
    pub fn local(shape: &ScreenConfiguration, factors: &[ComplexMatrix]) -> Result<Self> {
        if factors.len() != shape.screens() {
            return Err(Error::DimensionMismatch {
                expected: shape.screens(),
                found: factors.len(),
            });
        }
        let mut lambda = ComplexMatrix::identity(1);
        for (u, &count) in factors.iter().zip(shape.detector_counts()) {
            if u.rows() != count || u.cols() != count {
                return Err(Error::DimensionMismatch {
                    expected: count,
                    found: u.rows(),
                });
            }
            lambda = lambda.kron(u);
        }
        Self::new(shape.clone(), shape.clone(), lambda)
    }

    pub fn source_shape(&self) -> &ScreenConfiguration {
        &self.source
    }

    pub fn target_shape(&self) -> &ScreenConfiguration {
        &self.target
    }

    pub fn lambda(&self) -> &ComplexMatrix {
        &self.lambda
    }

    pub fn degree(&self) -> usize {
        self.source.dimension()
    }

    /// `next ∘ self`, with `λ = λ_next · λ_self`.
    pub fn then(&self, next: &BasisTransformation) -> Result<Self> {
        if next.source != self.target {
            return Err(Error::ShapeMismatch {
                expected: self.target.to_string(),
                found: next.source.to_string(),
            });
        }
        Self::new(
            self.source.clone(),
            next.target.clone(),
            next.lambda.matmul(&self.lambda)?,
        )
    }

    pub fn inverse(&self) -> Self {
        Self {
            source: self.target.clone(),
            target: self.source.clone(),
            lambda: self.lambda.adjoint(),
        }
    }

    /// Amplitudes of a pure state in the target basis.
    pub fn apply_to_state(&self, amplitudes: &[Complex64]) -> Result<Vec<Complex64>> {
        self.lambda.mul_vec(amplitudes)
    }
}

/// `α' = Σ_{k,k'} α_k^{k'} λ_κ^k conj(λ_{κ'}^{k'}) |κ⟩⟨κ'|`, i.e. `λ α λ†`.
pub fn change_basis(ea: &ExperimentalArrangement, bt: &BasisTransformation) -> Result<ExperimentalArrangement> {
    if ea.shape() != bt.source_shape() {
        return Err(Error::ShapeMismatch {
            expected: bt.source_shape().to_string(),
            found: ea.shape().to_string(),
        });
    }
    let rotated = ea
        .alpha()
        .apply_unitary(bt.lambda())?
        .reshaped(bt.target_shape().clone())?;
    let out = ExperimentalArrangement::new(rotated)?;
    Ok(match ea.label() {
        Some(l) => out.with_label(l),
        None => out,
    })
}

/// Same entries, read under another factorization of equal dimension.
pub fn refactorize(ea: &ExperimentalArrangement, new_shape: ScreenConfiguration) -> Result<ExperimentalArrangement> {
    let alpha = ea.alpha().reshaped(new_shape)?;
    Ok(ExperimentalArrangement::from_validated(
        alpha,
        ea.label().map(str::to_owned),
    ))
}

/// Removes one screen (1-based) by partial trace.
pub fn remove_screen(ea: &ExperimentalArrangement, screen: usize) -> Result<ExperimentalArrangement> {
    if ea.shape().screens() == 1 {
        return Err(Error::SingleScreen);
    }
    remove_screens(ea, &[screen])
}

/// Removes several screens at once; at least one screen must survive.
pub fn remove_screens(ea: &ExperimentalArrangement, screens: &[usize]) -> Result<ExperimentalArrangement> {
    let shape = ea.shape();
    for &p in screens {
        shape.check_position(p)?;
    }
    let mut distinct = screens.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() >= shape.screens() {
        return Err(Error::SingleScreen);
    }
    let reduced = ExperimentalArrangement::new(ea.alpha().partial_trace(&distinct)?)?;
    Ok(match ea.label() {
        Some(l) => reduced.with_label(l),
        None => reduced,
    })
}

/// Appends a screen with `ancilla_dim` detectors in the pure state
/// `ancilla_state` (the first detector when `None`): `α ⊗ |φ⟩⟨φ|`.
pub fn extend_arrangement(
    ea: &ExperimentalArrangement,
    ancilla_dim: usize,
    ancilla_state: Option<&[Complex64]>,
) -> Result<ExperimentalArrangement> {
    let ancilla_shape = ScreenConfiguration::new(vec![ancilla_dim])?;
    let ancilla = match ancilla_state {
        Some(phi) => ExperimentalArrangement::from_state_vector(phi, ancilla_shape)?,
        None => ExperimentalArrangement::basis_state(ancilla_shape, &MultiIndex(vec![1]))?,
    };
    let extended = ExperimentalArrangement::new(tensor_product(ea.alpha(), ancilla.alpha())?)?;
    Ok(match ea.label() {
        Some(l) => extended.with_label(l),
        None => extended,
    })
}

/// Residuals from [`verify_basis_invariance`].
#[derive(Clone, Debug, PartialEq)]
pub struct BasisInvarianceReport {
    pub spectrum_residual: f64,
    pub valuation_residual: f64,
    pub probes: usize,
    pub source_degree: usize,
    pub target_degree: usize,
    pub passed: bool,
}

/// Rank-one probe vectors: the product basis, the discrete Fourier basis, and
/// the eigenbasis of the arrangement.
fn probe_vectors(ea: &ExperimentalArrangement) -> Vec<Vec<Complex64>> {
    let n = ea.degree_of_complexity();
    let mut probes = Vec::with_capacity(3 * n);
    for i in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[i] = Complex64::new(1.0, 0.0);
        probes.push(e);
    }
    let scale = 1.0 / (n as f64).sqrt();
    for f in 0..n {
        probes.push(
            (0..n)
                .map(|j| Complex64::from_polar(scale, 2.0 * std::f64::consts::PI * (f * j) as f64 / n as f64))
                .collect(),
        );
    }
    let eig = crate::tensor::hermitian_eigendecomposition(ea.alpha().matrix()).expect("arrangements are Hermitian");
    for j in 0..n {
        probes.push(eig.eigenvectors.column(j));
    }
    probes
}

/// `⟨v|m|v⟩`, real part.
fn expectation(m: &ComplexMatrix, v: &[Complex64]) -> Result<f64> {
    let mv = m.mul_vec(v)?;
    Ok(v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum::<Complex64>().re)
}

/// Checks that `bt` maps `ea` to an equivalent arrangement: equal spectra,
/// `Ψ(P) = Ψ'(λ P λ†)` over a family of probe projectors, and equal degree.
pub fn verify_basis_invariance(
    ea: &ExperimentalArrangement,
    bt: &BasisTransformation,
) -> Result<BasisInvarianceReport> {
    if ea.degree_of_complexity() != bt.degree() {
        return Err(Error::DegreeMismatch {
            expected: bt.degree(),
            found: ea.degree_of_complexity(),
        });
    }
    let transformed = change_basis(ea, bt)?;

    let before = ea.spectrum();
    let after = transformed.spectrum();
    let spectrum_residual = before
        .iter()
        .zip(&after)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    // For P = |v⟩⟨v|, λPλ† = |λv⟩⟨λv|.
    let probes = probe_vectors(ea);
    let mut valuation_residual = 0.0f64;
    for v in &probes {
        let original = expectation(ea.alpha().matrix(), v)?;
        let moved = bt.apply_to_state(v)?;
        let transported = expectation(transformed.alpha().matrix(), &moved)?;
        valuation_residual = valuation_residual.max((original - transported).abs());
    }

    let source_degree = ea.degree_of_complexity();
    let target_degree = transformed.degree_of_complexity();
    Ok(BasisInvarianceReport {
        spectrum_residual,
        valuation_residual,
        probes: probes.len(),
        source_degree,
        target_degree,
        passed: spectrum_residual <= tolerance::SPECTRUM
            && valuation_residual <= tolerance::ADDITIVITY
            && source_degree == target_degree,
    })
}

/// Residuals from [`verify_factorization_invariance`].
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationInvarianceReport {
    pub trials: usize,
    pub ancilla_dim: usize,
    /// `max ‖remove(extend(α)) − α‖_max`
    pub max_roundtrip_residual: f64,
    /// `max |Σ_m potentia(k, m) − potentia(k)|`
    pub max_marginal_residual: f64,
    pub passed: bool,
}

/// Extends `ea` by an ancilla screen and removes it again, `trials` times.
///
/// Trial 0 uses the first detector as ancilla state; later trials use random
/// pure ancillas seeded from `seed + trial`.
pub fn verify_factorization_invariance_seeded(
    ea: &ExperimentalArrangement,
    ancilla_dim: usize,
    trials: usize,
    seed: u64,
) -> Result<FactorizationInvarianceReport> {
    let mut max_roundtrip_residual = 0.0f64;
    let mut max_marginal_residual = 0.0f64;
    let last = ea.shape().screens() + 1;
    let marginals = ea.potentia_table();
    for t in 0..trials {
        let phi = if t == 0 {
            None
        } else {
            Some(random_state(ancilla_dim, &mut seeded(seed.wrapping_add(t as u64))))
        };
        let extended = extend_arrangement(ea, ancilla_dim, phi.as_deref())?;
        let recovered = remove_screen(&extended, last)?;
        max_roundtrip_residual =
            max_roundtrip_residual.max(recovered.alpha().matrix().max_abs_diff(ea.alpha().matrix())?);

        for (k, marginal) in &marginals {
            let mut joint = 0.0;
            for m in 1..=ancilla_dim {
                let mut idx = k.0.clone();
                idx.push(m);
                joint += extended.potentia(&MultiIndex(idx))?;
            }
            max_marginal_residual = max_marginal_residual.max((joint - marginal).abs());
        }
    }
    Ok(FactorizationInvarianceReport {
        trials,
        ancilla_dim,
        max_roundtrip_residual,
        max_marginal_residual,
        passed: max_roundtrip_residual <= tolerance::STRUCTURE && max_marginal_residual <= tolerance::MARGINAL,
    })
}

pub fn verify_factorization_invariance(
    ea: &ExperimentalArrangement,
    ancilla_dim: usize,
    trials: usize,
) -> Result<FactorizationInvarianceReport> {
    verify_factorization_invariance_seeded(ea, ancilla_dim, trials, 0)
}

/// Product of `ea` with another arrangement, the second one's screens last.
pub fn combine(a: &ExperimentalArrangement, b: &ExperimentalArrangement) -> Result<ExperimentalArrangement> {
    ExperimentalArrangement::new(tensor_product(a.alpha(), b.alpha())?)
}

/// Reorders the screens of an arrangement (see
/// [`BasisTransformation::screen_permutation`]).
pub fn permute_screens(ea: &ExperimentalArrangement, order: &[usize]) -> Result<ExperimentalArrangement> {
    change_basis(ea, &BasisTransformation::screen_permutation(ea.shape(), order)?)
}
