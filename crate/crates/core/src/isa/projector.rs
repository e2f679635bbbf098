use std::collections::BTreeSet;

use num_complex::Complex64;

use super::arrangement::{ExperimentalArrangement, Power};
use crate::error::{Error, Result};
use crate::tensor::ComplexMatrix;
use crate::tolerance;

/// An orthogonal projector: `P = P² = P†` within the projector tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralProjector {
    matrix: ComplexMatrix,
}

impl GeneralProjector {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        let adjoint_dev = matrix.hermiticity_deviation();
        let idempotent_dev = matrix.matmul(&matrix)?.max_abs_diff(&matrix)?;
        let deviation = adjoint_dev.max(idempotent_dev);
        if !matrix.is_finite() || deviation > tolerance::PROJECTOR {
            return Err(Error::NotProjector { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dimension: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dimension),
        }
    }

    pub fn zero(dimension: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dimension, dimension),
        }
    }

    pub fn from_power(power: &Power) -> Self {
        let n = power.shape().dimension();
        let i = power.linear_index();
        let mut matrix = ComplexMatrix::zeros(n, n);
        matrix[(i, i)] = Complex64::new(1.0, 0.0);
        Self { matrix }
    }

    /// Projector onto the span of `vectors`, which are orthonormalized first.
    /// Vectors dependent on earlier ones are skipped.
    pub fn onto_span(dimension: usize, vectors: &[Vec<Complex64>]) -> Result<Self> {
        let mut basis: Vec<Vec<Complex64>> = Vec::new();
        for v in vectors {
            if v.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: v.len(),
                });
            }
            let mut w = v.clone();
            // Two passes of modified Gram–Schmidt.
            for _ in 0..2 {
                for e in &basis {
                    let proj: Complex64 = e.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in w.iter_mut().zip(e) {
                        *x -= proj * y;
                    }
                }
            }
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let scale = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-10 * scale.max(1.0) {
                basis.push(w.into_iter().map(|z| z / norm).collect());
            }
        }
        let mut matrix = ComplexMatrix::zeros(dimension, dimension);
        for e in &basis {
            matrix = matrix.add(&ComplexMatrix::outer(e, e))?;
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    /// `I − P`
    pub fn complement(&self) -> Self {
        Self {
            matrix: ComplexMatrix::identity(self.dimension())
                .sub(&self.matrix)
                .expect("square"),
        }
    }

    /// `u P u†` for a unitary `u`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.dimension() || u.cols() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: u.rows(),
            });
        }
        Self::new(u.matmul(&self.matrix)?.matmul(&u.adjoint())?)
    }

    fn check_same_dimension(&self, other: &Self) -> Result<()> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: other.dimension(),
            });
        }
        Ok(())
    }
}

/// Whether `‖P₁P₂ − P₂P₁‖_max` is within the projector tolerance.
pub fn commutes(p1: &GeneralProjector, p2: &GeneralProjector) -> Result<bool> {
    p1.check_same_dimension(p2)?;
    let ab = p1.matrix.matmul(&p2.matrix)?;
    let ba = p2.matrix.matmul(&p1.matrix)?;
    Ok(ab.max_abs_diff(&ba)? <= tolerance::PROJECTOR)
}

/// The valuation `Ψ(P) = Tr(α P)` induced by an arrangement.
#[derive(Clone, Copy, Debug)]
pub struct GlobalIntensiveValuation<'a> {
    backing: &'a ExperimentalArrangement,
}

impl<'a> GlobalIntensiveValuation<'a> {
    pub fn new(backing: &'a ExperimentalArrangement) -> Self {
        Self { backing }
    }

    pub fn arrangement(&self) -> &'a ExperimentalArrangement {
        self.backing
    }

    pub fn dimension(&self) -> usize {
        self.backing.degree_of_complexity()
    }

    /// `Tr(α P)`, real part.
    pub fn value(&self, p: &GeneralProjector) -> Result<f64> {
        if p.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: p.dimension(),
            });
        }
        Ok(trace_of_product(self.backing.alpha().matrix(), &p.matrix))
    }
}

/// `Re Tr(a b)` without forming the product.
fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc.re
}

pub fn potentia_of_projector(giv: &GlobalIntensiveValuation<'_>, p: &GeneralProjector) -> Result<f64> {
    giv.value(p)
}

/// Outcome of [`verify_additivity`].
#[derive(Clone, Debug, PartialEq)]
pub struct AdditivityReport {
    /// `Ψ(Σ P_i)`
    pub value_of_sum: f64,
    /// `Σ Ψ(P_i)`
    pub sum_of_values: f64,
    pub residual: f64,
    pub passed: bool,
}

/// Checks `Ψ(Σ P_i) = Σ Ψ(P_i)` for a pairwise orthogonal family.
pub fn verify_additivity(giv: &GlobalIntensiveValuation<'_>, family: &[GeneralProjector]) -> Result<AdditivityReport> {
    let n = giv.dimension();
    for p in family {
        if p.dimension() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.dimension(),
            });
        }
    }
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            let overlap = family[i].matrix.matmul(&family[j].matrix)?.max_abs();
            if overlap > tolerance::PROJECTOR {
                return Err(Error::NotOrthogonal {
                    first: i,
                    second: j,
                    overlap,
                });
            }
        }
    }
    let mut sum = ComplexMatrix::zeros(n, n);
    let mut sum_of_values = 0.0;
    for p in family {
        sum = sum.add(&p.matrix)?;
        sum_of_values += giv.value(p)?;
    }
    let value_of_sum = giv.value(&GeneralProjector::new(sum)?)?;
    let residual = (value_of_sum - sum_of_values).abs();
    Ok(AdditivityReport {
        value_of_sum,
        sum_of_values,
        residual,
        passed: residual <= tolerance::ADDITIVITY,
    })
}

/// Finite piece of the graph of powers: the given projectors, with an edge
/// between every commuting pair.
#[derive(Clone, Debug)]
pub struct PowersGraph {
    vertices: Vec<GeneralProjector>,
    /// Pairs `(i, j)` with `i < j`.
    edges: BTreeSet<(usize, usize)>,
}

impl PowersGraph {
    pub fn vertices(&self) -> &[GeneralProjector] {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.contains(&key)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == v || *b == v).count()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertices.len();
        self.edges.len() == n * n.saturating_sub(1) / 2
    }
}

pub fn build_powers_graph(projectors: Vec<GeneralProjector>) -> Result<PowersGraph> {
    if let Some(first) = projectors.first() {
        for p in &projectors[1..] {
            first.check_same_dimension(p)?;
        }
    }
    let mut edges = BTreeSet::new();
    for i in 0..projectors.len() {
        for j in (i + 1)..projectors.len() {
            if commutes(&projectors[i], &projectors[j])? {
                edges.insert((i, j));
            }
        }
    }
    Ok(PowersGraph {
        vertices: projectors,
        edges,
    })
}
