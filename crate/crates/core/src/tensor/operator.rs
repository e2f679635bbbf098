use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ONE, ZERO};
use super::shape::{MultiIndex, ScreenConfiguration, DEFAULT_DIMENSION_CAP};
use crate::error::{Error, Result};
use crate::tolerance;

/// An operator `Σ t_{k}^{k'} |k⟩⟨k'|` over a factorized detector space,
/// stored as an `N × N` matrix under the configuration's linearization.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperatorTensor {
    shape: ScreenConfiguration,
    matrix: ComplexMatrix,
}

impl DenseOperatorTensor {
    pub fn new(shape: ScreenConfiguration, matrix: ComplexMatrix) -> Result<Self> {
        let n = shape.dimension();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: matrix.rows() * matrix.cols(),
            });
        }
        Ok(Self { shape, matrix })
    }

    pub fn zeros(shape: ScreenConfiguration) -> Self {
        let n = shape.dimension();
        Self {
            shape,
            matrix: ComplexMatrix::zeros(n, n),
        }
    }

    pub fn identity(shape: ScreenConfiguration) -> Self {
        let n = shape.dimension();
        Self {
            shape,
            matrix: ComplexMatrix::identity(n),
        }
    }

    /// Diagonal tensor with real entries.
    pub fn from_real_diagonal(shape: ScreenConfiguration, diagonal: &[f64]) -> Result<Self> {
        let diag: Vec<Complex64> = diagonal.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(shape, ComplexMatrix::from_diagonal(&diag))
    }

    /// Sparse construction from `(bra, ket, value)` triples; later duplicates
    /// overwrite earlier ones.
    pub fn from_entries<I>(shape: ScreenConfiguration, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, MultiIndex, Complex64)>,
    {
        let mut t = Self::zeros(shape);
        for (bra, ket, value) in entries {
            let i = t.shape.flatten(&bra)?;
            let j = t.shape.flatten(&ket)?;
            t.matrix[(i, j)] = value;
        }
        Ok(t)
    }

    /// Projector onto a single product-basis element.
    pub fn basis_projector(shape: ScreenConfiguration, index: &MultiIndex) -> Result<Self> {
        let i = shape.flatten(index)?;
        let mut t = Self::zeros(shape);
        t.matrix[(i, i)] = ONE;
        Ok(t)
    }

    pub fn shape(&self) -> &ScreenConfiguration {
        &self.shape
    }

    pub fn dimension(&self) -> usize {
        self.shape.dimension()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn entry(&self, bra: &MultiIndex, ket: &MultiIndex) -> Result<Complex64> {
        Ok(self.matrix[(self.shape.flatten(bra)?, self.shape.flatten(ket)?)])
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        self.matrix.diagonal()
    }

    /// Same entries under another factorization of equal total dimension.
    pub fn reshaped(&self, shape: ScreenConfiguration) -> Result<Self> {
        if shape.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: shape.dimension(),
            });
        }
        Ok(Self {
            shape,
            matrix: self.matrix.clone(),
        })
    }

    /// `entry(bra, ket) ↦ conj(entry(ket, bra))`
    pub fn conjugate_transpose(&self) -> Self {
        Self {
            shape: self.shape.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Traces out the given 1-based screen positions.
    ///
    /// The surviving screens keep their relative order. Tracing every screen
    /// yields a `1 × 1` tensor on configuration `[1]` holding the trace.
    pub fn partial_trace(&self, screens_to_trace: &[usize]) -> Result<Self> {
        let n = self.shape.screens();
        let mut traced = vec![false; n];
        for &p in screens_to_trace {
            self.shape.check_position(p)?;
            traced[p - 1] = true;
        }
        let counts = self.shape.detector_counts();
        let strides = self.shape.strides();

        let kept: Vec<usize> = (0..n).filter(|&j| !traced[j]).collect();
        let gone: Vec<usize> = (0..n).filter(|&j| traced[j]).collect();
        let kept_counts: Vec<usize> = kept.iter().map(|&j| counts[j]).collect();
        let gone_counts: Vec<usize> = gone.iter().map(|&j| counts[j]).collect();

        let out_shape = if kept.is_empty() {
            ScreenConfiguration::new(vec![1])?
        } else {
            ScreenConfiguration::with_cap(kept_counts.clone(), usize::MAX)?
        };

        // Offsets into the full linearization contributed by each kept / traced
        // sub-index, in the sub-configuration's own linear order.
        let kept_offsets = offsets(&kept, &kept_counts, &strides);
        let gone_offsets = offsets(&gone, &gone_counts, &strides);

        let m = out_shape.dimension();
        let mut out = ComplexMatrix::zeros(m, m);
        for (a, &row_base) in kept_offsets.iter().enumerate() {
            for (b, &col_base) in kept_offsets.iter().enumerate() {
                let mut acc = ZERO;
                for &g in &gone_offsets {
                    acc += self.matrix[(row_base + g, col_base + g)];
                }
                out[(a, b)] = acc;
            }
        }
        Ok(Self {
            shape: out_shape,
            matrix: out,
        })
    }

    /// `u · t · u†`, with `u` required unitary to within the structural tolerance.
    pub fn apply_unitary(&self, u: &ComplexMatrix) -> Result<Self> {
        let n = self.dimension();
        if u.rows() != n || u.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: u.rows().max(u.cols()),
            });
        }
        let deviation = u.unitarity_deviation();
        if deviation > tolerance::STRUCTURE {
            return Err(Error::NotUnitary { deviation });
        }
        let matrix = u.matmul(&self.matrix)?.matmul(&u.adjoint())?;
        Ok(Self {
            shape: self.shape.clone(),
            matrix,
        })
    }
}

/// Linear offsets for every assignment of the selected screens, enumerated in
/// mixed-radix order over `sub_counts`.
fn offsets(screens: &[usize], sub_counts: &[usize], strides: &[usize]) -> Vec<usize> {
    let total: usize = sub_counts.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; screens.len()];
    for _ in 0..total {
        out.push(screens.iter().zip(&digits).map(|(&s, &d)| d * strides[s]).sum());
        for pos in (0..digits.len()).rev() {
            digits[pos] += 1;
            if digits[pos] < sub_counts[pos] {
                break;
            }
            digits[pos] = 0;
        }
    }
    out
}

/// `a ⊗ b` with `a`'s screens first, capped at [`DEFAULT_DIMENSION_CAP`].
pub fn tensor_product(a: &DenseOperatorTensor, b: &DenseOperatorTensor) -> Result<DenseOperatorTensor> {
    tensor_product_with_cap(a, b, DEFAULT_DIMENSION_CAP)
}

pub fn tensor_product_with_cap(
    a: &DenseOperatorTensor,
    b: &DenseOperatorTensor,
    cap: usize,
) -> Result<DenseOperatorTensor> {
    let shape = a.shape.concat(&b.shape, cap)?;
    Ok(DenseOperatorTensor {
        shape,
        matrix: a.matrix.kron(&b.matrix),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(c: &[usize]) -> ScreenConfiguration {
        ScreenConfiguration::new(c.to_vec()).unwrap()
    }

    fn ket(labels: &[usize]) -> MultiIndex {
        MultiIndex::from_zero_based(labels)
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn section4_four_screen() -> DenseOperatorTensor {
        DenseOperatorTensor::from_entries(
            shape(&[2, 2, 2, 2]),
            [
                (ket(&[0, 1, 0, 1]), ket(&[0, 1, 0, 1]), c(0.5)),
                (ket(&[1, 1, 1, 1]), ket(&[1, 1, 1, 1]), c(0.5)),
            ],
        )
        .unwrap()
    }

    fn section4_three_screen() -> DenseOperatorTensor {
        DenseOperatorTensor::from_entries(
            shape(&[2, 2, 2]),
            [
                (ket(&[0, 1, 0]), ket(&[0, 1, 0]), c(0.5)),
                (ket(&[1, 1, 1]), ket(&[1, 1, 1]), c(0.5)),
            ],
        )
        .unwrap()
    }

    fn bell() -> DenseOperatorTensor {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [c(s), c(0.0), c(0.0), c(s)];
        DenseOperatorTensor::new(shape(&[2, 2]), ComplexMatrix::outer(&psi, &psi)).unwrap()
    }

    #[test]
    fn identity_product() {
        let i2 = DenseOperatorTensor::identity(shape(&[2]));
        let i4 = tensor_product(&i2, &i2).unwrap();
        assert_eq!(i4.shape(), &shape(&[2, 2]));
        assert_eq!(i4.matrix(), &ComplexMatrix::identity(4));
    }

    #[test]
    fn diagonal_product_enumerated() {
        let a = DenseOperatorTensor::from_real_diagonal(shape(&[2]), &[0.7, 0.3]).unwrap();
        let b = DenseOperatorTensor::from_real_diagonal(shape(&[2]), &[0.0, 1.0]).unwrap();
        let p = tensor_product(&a, &b).unwrap();
        // Hand enumeration of all 16 entries: only (i,i) with second digit 1
        // (0-based) survive, carrying a's weight.
        let expected = [0.0, 0.7, 0.0, 0.3];
        for (i, &diag) in expected.iter().enumerate() {
            for j in 0..4 {
                let want = if i == j { diag } else { 0.0 };
                assert_eq!(p.matrix()[(i, j)], c(want), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn diagonal_product_with_first_detector() {
        // diag(0.7,0.3) ⊗ |1⟩⟨1| where |1⟩ is the first detector.
        let a = DenseOperatorTensor::from_real_diagonal(shape(&[2]), &[0.7, 0.3]).unwrap();
        let b = DenseOperatorTensor::from_real_diagonal(shape(&[2]), &[1.0, 0.0]).unwrap();
        let p = tensor_product(&a, &b).unwrap();
        let d: Vec<f64> = p.diagonal().iter().map(|z| z.re).collect();
        assert_eq!(d, vec![0.7, 0.0, 0.3, 0.0]);
    }

    #[test]
    fn section4_extension_by_product() {
        let last = DenseOperatorTensor::basis_projector(shape(&[2]), &ket(&[1])).unwrap();
        let extended = tensor_product(&section4_three_screen(), &last).unwrap();
        assert_eq!(extended, section4_four_screen());
    }

    #[test]
    fn product_respects_cap() {
        let a = DenseOperatorTensor::identity(shape(&[64]));
        let err = tensor_product_with_cap(&a, &a, 1024).unwrap_err();
        assert!(matches!(err, Error::CapacityExceeded { .. }));
    }

    #[test]
    fn conjugate_transpose_examples() {
        let t = DenseOperatorTensor::new(
            shape(&[2]),
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap(),
        )
        .unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(t.conjugate_transpose().matrix(), &expected);
        assert_eq!(bell().conjugate_transpose(), bell());

        let z = DenseOperatorTensor::from_entries(
            shape(&[3]),
            [(MultiIndex(vec![1]), MultiIndex(vec![3]), Complex64::new(0.25, -2.0))],
        )
        .unwrap();
        let zt = z.conjugate_transpose();
        assert_eq!(
            zt.entry(&MultiIndex(vec![3]), &MultiIndex(vec![1])).unwrap(),
            Complex64::new(0.25, 2.0)
        );
    }

    #[test]
    fn trace_examples() {
        assert_eq!(DenseOperatorTensor::identity(shape(&[2, 3])).trace(), c(6.0));
        assert_eq!(section4_four_screen().trace(), c(1.0));
    }

    #[test]
    fn section4_partial_trace() {
        let reduced = section4_four_screen().partial_trace(&[4]).unwrap();
        assert_eq!(reduced, section4_three_screen());
    }

    #[test]
    fn bell_partial_trace_is_maximally_mixed() {
        let reduced = bell().partial_trace(&[2]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.5]]).unwrap();
        assert!(reduced.matrix().max_abs_diff(&expected).unwrap() < 1e-15);
        let other = bell().partial_trace(&[1]).unwrap();
        assert!(other.matrix().max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn partial_trace_of_everything_is_the_trace() {
        let t = section4_four_screen().partial_trace(&[1, 2, 3, 4]).unwrap();
        assert_eq!(t.shape(), &shape(&[1]));
        assert_eq!(t.matrix()[(0, 0)], c(1.0));
    }

    #[test]
    fn partial_trace_middle_screen() {
        // a ⊗ b ⊗ c traced over b gives a ⊗ c · tr(b)
        let a = DenseOperatorTensor::from_real_diagonal(shape(&[2]), &[0.25, 0.75]).unwrap();
        let b = DenseOperatorTensor::from_real_diagonal(shape(&[3]), &[1.0, 2.0, 3.0]).unwrap();
        let cc = DenseOperatorTensor::new(
            shape(&[2]),
            ComplexMatrix::from_real_rows(&[&[0.5, 0.1], &[0.1, 0.5]]).unwrap(),
        )
        .unwrap();
        let abc = tensor_product(&tensor_product(&a, &b).unwrap(), &cc).unwrap();
        let reduced = abc.partial_trace(&[2]).unwrap();
        let expected = tensor_product(&a, &cc).unwrap().matrix().scale(c(6.0));
        assert!(reduced.matrix().max_abs_diff(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn partial_trace_rejects_bad_positions() {
        assert!(bell().partial_trace(&[0]).is_err());
        assert!(bell().partial_trace(&[3]).is_err());
    }

    #[test]
    fn hadamard_conjugation() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]).unwrap();
        let t = DenseOperatorTensor::from_real_diagonal(shape(&[2]), &[0.7, 0.3]).unwrap();
        let r = t.apply_unitary(&u).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0.5, 0.2], &[0.2, 0.5]]).unwrap();
        assert!(r.matrix().max_abs_diff(&expected).unwrap() < 1e-15);
        assert_eq!(t.apply_unitary(&ComplexMatrix::identity(2)).unwrap(), t);
    }

    #[test]
    fn apply_unitary_errors() {
        let t = DenseOperatorTensor::identity(shape(&[2]));
        assert!(matches!(
            t.apply_unitary(&ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
        let not_unitary = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(t.apply_unitary(&not_unitary), Err(Error::NotUnitary { .. })));
    }
}
