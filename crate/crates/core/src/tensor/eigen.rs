use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerance;

/// Spectrum of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Descending; ties keep the solver's first-occurrence order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, aligned with `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V Λ V†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj()).sum()
        })
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Fails with [`Error::NotHermitian`] when `‖m − m†‖_max` exceeds the
/// structural tolerance.
pub fn hermitian_eigendecomposition(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let deviation = m.hermiticity_deviation();
    if !m.is_finite() || deviation > tolerance::STRUCTURE {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.rows();
    // Symmetrize so the solver sees an exactly Hermitian input.
    let sym = DMatrix::<Complex64>::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let eig = SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort: equal eigenvalues keep first-occurrence order.
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let a = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        a.add(&a.adjoint()).unwrap()
    }

    #[test]
    fn diagonal_spectrum_sorted_descending() {
        let m = ComplexMatrix::from_real_rows(&[&[0.3, 0.0], &[0.0, 0.7]]).unwrap();
        let e = hermitian_eigendecomposition(&m).unwrap();
        assert!((e.eigenvalues[0] - 0.7).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let e = hermitian_eigendecomposition(&ComplexMatrix::identity(5)).unwrap();
        assert!(e.eigenvalues.iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 3, 7, 16, 33, 64] {
            let m = random_hermitian(n, &mut rng);
            let e = hermitian_eigendecomposition(&m).unwrap();
            assert!(e.reconstruct().max_abs_diff(&m).unwrap() <= tolerance::RECONSTRUCTION);
            let v = &e.eigenvectors;
            assert!(
                v.adjoint()
                    .matmul(v)
                    .unwrap()
                    .max_abs_diff(&ComplexMatrix::identity(n))
                    .unwrap()
                    < 1e-12
            );
            assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            hermitian_eigendecomposition(&m),
            Err(Error::NotHermitian { .. })
        ));
    }
}
