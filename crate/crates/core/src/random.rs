//! Seeded random generators for unitaries, states, arrangements and projector
//! families.
//!
//! Everything draws from a caller-supplied [`SeededRng`], so identical seeds
//! give identical objects.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::isa::{ExperimentalArrangement, GeneralProjector};
use crate::tensor::{ComplexMatrix, ScreenConfiguration};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut SeededRng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Uniformly distributed unit vector of length `n`.
pub fn random_state(n: usize, rng: &mut SeededRng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-distributed `n × n` unitary: Gram–Schmidt on a complex Ginibre matrix.
pub fn haar_unitary(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for e in &cols {
                let proj: Complex64 = e.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(e) {
                    *x -= proj * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Mixture of `terms` random pure states with random weights.
pub fn random_arrangement(
    shape: ScreenConfiguration,
    terms: usize,
    rng: &mut SeededRng,
) -> Result<ExperimentalArrangement> {
    let n = shape.dimension();
    let terms = terms.max(1);
    let raw: Vec<f64> = (0..terms).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    // Build the mixture directly; the weights may miss 1 by a few ulps.
    let mut acc = ComplexMatrix::zeros(n, n);
    for w in &weights {
        let psi = random_state(n, rng);
        acc = acc.add(&ComplexMatrix::outer(&psi, &psi).scale(Complex64::new(*w, 0.0)))?;
    }
    ExperimentalArrangement::new(crate::tensor::DenseOperatorTensor::new(shape, acc)?)
}

/// Random `n`-dimensional rank-`rank` projector.
pub fn random_projector(n: usize, rank: usize, rng: &mut SeededRng) -> GeneralProjector {
    let u = haar_unitary(n, rng);
    let vectors: Vec<_> = (0..rank.min(n)).map(|j| u.column(j)).collect();
    GeneralProjector::onto_span(n, &vectors).expect("columns have length n")
}

/// Random subspace of a random dimension, split into pairwise orthogonal
/// projectors of random ranks.
pub fn random_orthogonal_family(n: usize, rng: &mut SeededRng) -> Vec<GeneralProjector> {
    let u = haar_unitary(n, rng);
    let subspace = rng.random_range(1..=n);
    let mut family = Vec::new();
    let mut start = 0;
    while start < subspace {
        let len = rng.random_range(1..=subspace - start);
        let vectors: Vec<_> = (start..start + len).map(|j| u.column(j)).collect();
        family.push(GeneralProjector::onto_span(n, &vectors).expect("columns have length n"));
        start += len;
    }
    family
}
