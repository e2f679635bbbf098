#![allow(dead_code)]

use multiscreen::isa::ExperimentalArrangement;
use multiscreen::random::{random_arrangement, seeded, SeededRng};
use multiscreen::tensor::{Complex64, ComplexMatrix, ScreenConfiguration};
use proptest::prelude::*;
use rand::Rng;

pub fn data(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples/data")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Detector counts with total dimension at most `max_dim`.
pub fn counts(max_screens: usize, max_detectors: usize, max_dim: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1..=max_detectors, 1..=max_screens)
        .prop_filter("dimension cap", move |c| c.iter().product::<usize>() <= max_dim)
}

/// Like [`counts`] but with at least two screens of two or more detectors.
pub fn multi_counts(max_screens: usize, max_detectors: usize, max_dim: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2..=max_detectors, 2..=max_screens)
        .prop_filter("dimension cap", move |c| c.iter().product::<usize>() <= max_dim)
}

pub fn shape(c: &[usize]) -> ScreenConfiguration {
    ScreenConfiguration::new(c.to_vec()).unwrap()
}

pub fn arrangement(c: &[usize], terms: usize, seed: u64) -> ExperimentalArrangement {
    random_arrangement(shape(c), terms, &mut seeded(seed)).unwrap()
}

pub fn ginibre(rows: usize, cols: usize, rng: &mut SeededRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
    let a = ginibre(n, n, rng);
    a.add(&a.adjoint()).unwrap()
}

pub fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn rng(seed: u64) -> SeededRng {
    seeded(seed)
}
