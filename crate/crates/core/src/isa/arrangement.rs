use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{
    hermitian_eigendecomposition, ComplexMatrix, DenseOperatorTensor, MultiIndex, ScreenConfiguration,
};
use crate::tolerance;

/// Result of a single validation check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// The measured quantity (deviation, trace, smallest eigenvalue, …).
    pub value: f64,
    pub detail: String,
}

/// Outcome of [`validate_isa`]: Hermiticity, unit trace, positivity and
/// diagonal range, in that order.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in self.failures() {
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            write!(f, "{}: {}", c.name, c.detail)?;
        }
        if first {
            write!(f, "valid")?;
        }
        Ok(())
    }
}

/// Checks whether a tensor is a valid arrangement: Hermitian, unit trace,
/// positive semidefinite, with real diagonal entries in `[0, 1]`.
pub fn validate_isa(tensor: &DenseOperatorTensor) -> ValidationReport {
    let m = tensor.matrix();
    let mut checks = Vec::with_capacity(4);

    let finite = m.is_finite();
    let herm = if finite {
        m.hermiticity_deviation()
    } else {
        f64::INFINITY
    };
    let hermitian = herm <= tolerance::STRUCTURE;
    checks.push(Check {
        name: "hermiticity",
        passed: hermitian,
        value: herm,
        detail: if finite {
            format!("max deviation {herm:e}")
        } else {
            "non-finite entries".into()
        },
    });

    let tr = tensor.trace();
    let trace_ok = (tr - Complex64::new(1.0, 0.0)).norm() <= tolerance::NORMALIZATION;
    checks.push(Check {
        name: "trace",
        passed: trace_ok,
        value: tr.re,
        detail: if tr.im == 0.0 {
            format!("{}", tr.re)
        } else {
            format!("{}{:+}i", tr.re, tr.im)
        },
    });

    if hermitian {
        let min_eig = if is_diagonal(m) {
            m.diagonal().iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
        } else {
            hermitian_eigendecomposition(m)
                .map(|e| e.eigenvalues.last().copied().unwrap_or(0.0))
                .unwrap_or(f64::NEG_INFINITY)
        };
        checks.push(Check {
            name: "positivity",
            passed: min_eig >= tolerance::EIGENVALUE_FLOOR,
            value: min_eig,
            detail: format!("smallest eigenvalue {min_eig}"),
        });
    } else {
        checks.push(Check {
            name: "positivity",
            passed: false,
            value: f64::NAN,
            detail: "not evaluated for a non-Hermitian tensor".into(),
        });
    }

    let diag = tensor.diagonal();
    let worst_im = diag.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let min_re = diag.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let max_re = diag.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let range_ok = finite
        && worst_im <= tolerance::PROJECTOR
        && min_re >= -tolerance::NORMALIZATION
        && max_re <= 1.0 + tolerance::NORMALIZATION;
    checks.push(Check {
        name: "diagonal",
        passed: range_ok,
        value: if min_re < 0.0 { min_re } else { max_re },
        detail: format!("real parts in [{min_re}, {max_re}], max |imaginary part| {worst_im:e}"),
    });

    ValidationReport { checks }
}

fn is_diagonal(m: &ComplexMatrix) -> bool {
    let n = m.cols();
    m.as_slice()
        .iter()
        .enumerate()
        .all(|(p, z)| p / n == p % n || (z.re == 0.0 && z.im == 0.0))
}

/// A rank-one product-basis projector `|k_1…k_n⟩⟨k_1…k_n|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Power {
    shape: ScreenConfiguration,
    index: MultiIndex,
}

impl Power {
    pub fn new(shape: ScreenConfiguration, index: MultiIndex) -> Result<Self> {
        shape.flatten(&index)?;
        Ok(Self { shape, index })
    }

    pub fn shape(&self) -> &ScreenConfiguration {
        &self.shape
    }

    pub fn index(&self) -> &MultiIndex {
        &self.index
    }

    /// Position of this power in the linear basis order.
    pub fn linear_index(&self) -> usize {
        self.shape.flatten(&self.index).expect("validated on construction")
    }
}

/// Outcome of [`ExperimentalArrangement::purity_abstract`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbstractPurity {
    /// `Tr(α²)`
    pub value: f64,
    pub is_pure: bool,
}

/// Outcome of [`ExperimentalArrangement::purity_operational`].
#[derive(Clone, Debug, PartialEq)]
pub struct OperationalPurity {
    pub max_eigenvalue: f64,
    pub certain_power_exists: bool,
    /// Eigenvector of the largest eigenvalue. When a certain power exists this
    /// is the basis element whose projector has potentia one.
    pub witness: Vec<Complex64>,
}

/// A validated Hermitian, trace-one, positive tensor over a factorization.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentalArrangement {
    alpha: DenseOperatorTensor,
    label: Option<String>,
}

impl ExperimentalArrangement {
    /// Validates `alpha`, failing with [`Error::InvalidArrangement`].
    pub fn new(alpha: DenseOperatorTensor) -> Result<Self> {
        let report = validate_isa(&alpha);
        if !report.is_valid() {
            return Err(Error::InvalidArrangement(report));
        }
        Ok(Self { alpha, label: None })
    }

    /// Wraps a tensor whose validity follows from construction (for example a
    /// relabeling of an arrangement's entries).
    pub(crate) fn from_validated(alpha: DenseOperatorTensor, label: Option<String>) -> Self {
        debug_assert!(validate_isa(&alpha).is_valid());
        Self { alpha, label }
    }

    /// Sets the Q-Lab name. It is an opaque label and plays no role in any
    /// computation.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn alpha(&self) -> &DenseOperatorTensor {
        &self.alpha
    }

    pub fn shape(&self) -> &ScreenConfiguration {
        self.alpha.shape()
    }

    /// The pure arrangement `|ψ⟩⟨ψ|`.
    pub fn from_state_vector(amplitudes: &[Complex64], shape: ScreenConfiguration) -> Result<Self> {
        if amplitudes.len() != shape.dimension() {
            return Err(Error::DimensionMismatch {
                expected: shape.dimension(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > tolerance::NORMALIZATION {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(DenseOperatorTensor::new(
            shape,
            ComplexMatrix::outer(amplitudes, amplitudes),
        )?)
    }

    /// The pure arrangement of a single product-basis element.
    pub fn basis_state(shape: ScreenConfiguration, index: &MultiIndex) -> Result<Self> {
        Self::new(DenseOperatorTensor::basis_projector(shape, index)?)
    }

    /// Diagonal arrangement with the given potentia in linear order.
    pub fn diagonal(shape: ScreenConfiguration, potentia: &[f64]) -> Result<Self> {
        Self::new(DenseOperatorTensor::from_real_diagonal(shape, potentia)?)
    }

    /// Diagonal arrangement from sparse `(power, potentia)` pairs.
    pub fn diagonal_mixture(shape: ScreenConfiguration, terms: &[(MultiIndex, f64)]) -> Result<Self> {
        Self::new(DenseOperatorTensor::from_entries(
            shape,
            terms
                .iter()
                .map(|(k, w)| (k.clone(), k.clone(), Complex64::new(*w, 0.0))),
        )?)
    }

    /// Convex combination `Σ w_i α_i` of arrangements with identical shapes.
    pub fn from_mixture(weights: &[f64], arrangements: &[ExperimentalArrangement]) -> Result<Self> {
        if weights.len() != arrangements.len() {
            return Err(Error::InvalidMixture(format!(
                "{} weights for {} arrangements",
                weights.len(),
                arrangements.len()
            )));
        }
        let Some(first) = arrangements.first() else {
            return Err(Error::InvalidMixture("empty mixture".into()));
        };
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidMixture(format!("weight {w} is negative or not finite")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tolerance::NORMALIZATION {
            return Err(Error::InvalidMixture(format!("weights sum to {total}")));
        }
        let shape = first.shape().clone();
        let n = shape.dimension();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (w, ea) in weights.iter().zip(arrangements) {
            if ea.shape() != &shape {
                return Err(Error::ShapeMismatch {
                    expected: shape.to_string(),
                    found: ea.shape().to_string(),
                });
            }
            acc = acc.add(&ea.alpha.matrix().scale(Complex64::new(*w, 0.0)))?;
        }
        Self::new(DenseOperatorTensor::new(shape, acc)?)
    }

    /// Degree of complexity: the number of powers.
    pub fn degree_of_complexity(&self) -> usize {
        self.shape().dimension()
    }

    /// Potentia of the power at `index`.
    pub fn potentia(&self, index: &MultiIndex) -> Result<f64> {
        let i = self.shape().flatten(index)?;
        Ok(self.alpha.matrix()[(i, i)].re)
    }

    pub fn potentia_of_power(&self, power: &Power) -> Result<f64> {
        if power.shape() != self.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape().to_string(),
                found: power.shape().to_string(),
            });
        }
        self.potentia(power.index())
    }

    /// Every power with its potentia, in linear order.
    pub fn potentia_table(&self) -> Vec<(MultiIndex, f64)> {
        self.shape()
            .multi_indices()
            .zip(self.alpha.diagonal())
            .map(|(k, z)| (k, z.re))
            .collect()
    }

    /// Eigenvalues, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eigendecomposition(self.alpha.matrix())
            .expect("arrangements are Hermitian")
            .eigenvalues
    }

    /// `Tr(α²)`; pure iff it equals one.
    pub fn purity_abstract(&self) -> AbstractPurity {
        let m = self.alpha.matrix();
        let n = m.rows();
        let mut value = 0.0;
        for i in 0..n {
            for j in 0..n {
                value += (m[(i, j)] * m[(j, i)]).re;
            }
        }
        AbstractPurity {
            value,
            is_pure: (value - 1.0).abs() <= tolerance::PROJECTOR,
        }
    }

    /// Largest eigenvalue; a certain power exists iff it equals one.
    pub fn purity_operational(&self) -> OperationalPurity {
        let eig = hermitian_eigendecomposition(self.alpha.matrix()).expect("arrangements are Hermitian");
        let max_eigenvalue = eig.eigenvalues[0];
        OperationalPurity {
            max_eigenvalue,
            certain_power_exists: (max_eigenvalue - 1.0).abs() <= tolerance::PROJECTOR,
            witness: eig.eigenvectors.column(0),
        }
    }
}

pub fn build_from_state_vector(
    amplitudes: &[Complex64],
    shape: ScreenConfiguration,
) -> Result<ExperimentalArrangement> {
    ExperimentalArrangement::from_state_vector(amplitudes, shape)
}

pub fn build_from_mixture(
    weights: &[f64],
    arrangements: &[ExperimentalArrangement],
) -> Result<ExperimentalArrangement> {
    ExperimentalArrangement::from_mixture(weights, arrangements)
}

pub fn potentia_of_power(ea: &ExperimentalArrangement, power: &Power) -> Result<f64> {
    ea.potentia_of_power(power)
}

pub fn degree_of_complexity(ea: &ExperimentalArrangement) -> usize {
    ea.degree_of_complexity()
}

pub fn purity_abstract(ea: &ExperimentalArrangement) -> AbstractPurity {
    ea.purity_abstract()
}

pub fn purity_operational(ea: &ExperimentalArrangement) -> OperationalPurity {
    ea.purity_operational()
}
