mod common;

use common::*;
use multiscreen::random::{haar_unitary, random_state};
use multiscreen::tensor::{hermitian_eigendecomposition, ComplexMatrix, MultiIndex, ScreenConfiguration};
use multiscreen::transforms::{
    change_basis, extend_arrangement, refactorize, remove_screen, verify_factorization_invariance_seeded,
    BasisTransformation,
};
use proptest::prelude::*;

/// A different factorization of the same dimension, or the original one.
fn regroup(c: &[usize]) -> Vec<usize> {
    let n: usize = c.iter().product();
    match (2..n).find(|d| n.is_multiple_of(*d)) {
        Some(d) => vec![d, n / d],
        None => vec![n],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn change_of_basis_keeps_the_conditions(c in counts(3, 4, 64), terms in 1usize..=4, seed in any::<u64>()) {
        let ea = arrangement(&c, terms, seed);
        let n = ea.degree_of_complexity();
        let target = ScreenConfiguration::new(regroup(&c)).unwrap();
        let bt = BasisTransformation::new(ea.shape().clone(), target.clone(), haar_unitary(n, &mut rng(seed + 1))).unwrap();
        let out = change_basis(&ea, &bt).unwrap();
        prop_assert_eq!(out.shape(), &target);
        let m = out.alpha().matrix();
        prop_assert!((m.trace().re - 1.0).abs() <= 1e-9);
        prop_assert!(m.hermiticity_deviation() <= 1e-9);
        let after = hermitian_eigendecomposition(m).unwrap().eigenvalues;
        prop_assert!(after.iter().all(|&l| l >= -1e-9));
        prop_assert!(max_diff(&after, &ea.spectrum()) <= 1e-9);
    }

    #[test]
    fn composition_matches_sequential_changes(c in counts(3, 3, 27), seed in any::<u64>()) {
        let ea = arrangement(&c, 2, seed);
        let n = ea.degree_of_complexity();
        let mid = ScreenConfiguration::new(regroup(&c)).unwrap();
        let mut r = rng(seed);
        let first = BasisTransformation::new(ea.shape().clone(), mid.clone(), haar_unitary(n, &mut r)).unwrap();
        let second = BasisTransformation::new(mid, ea.shape().clone(), haar_unitary(n, &mut r)).unwrap();
        let twice = change_basis(&change_basis(&ea, &first).unwrap(), &second).unwrap();
        let once = change_basis(&ea, &first.then(&second).unwrap()).unwrap();
        prop_assert!(twice.alpha().matrix().max_abs_diff(once.alpha().matrix()).unwrap() <= 1e-9);
    }

    #[test]
    fn refactorization_is_bit_identical(c in counts(4, 4, 64), seed in any::<u64>()) {
        let ea = arrangement(&c, 3, seed);
        let out = refactorize(&ea, ScreenConfiguration::new(regroup(&c)).unwrap()).unwrap();
        let (a, b) = (ea.alpha().matrix().as_slice(), out.alpha().matrix().as_slice());
        prop_assert!(a.iter().zip(b).all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
    }

    #[test]
    fn removal_commutes_with_local_changes(c in multi_counts(4, 3, 81), pick in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let ea = arrangement(&c, 3, seed);
        let removed = pick.index(c.len()) + 1;
        let mut r = rng(seed + 7);
        let factors: Vec<ComplexMatrix> = c.iter().enumerate()
            .map(|(j, &d)| if j + 1 == removed { ComplexMatrix::identity(d) } else { haar_unitary(d, &mut r) })
            .collect();
        let full = BasisTransformation::local(ea.shape(), &factors).unwrap();
        let survivors: Vec<ComplexMatrix> = factors.iter().enumerate()
            .filter(|(j, _)| j + 1 != removed).map(|(_, f)| f.clone()).collect();
        let reduced_shape = ScreenConfiguration::new(
            c.iter().enumerate().filter(|(j, _)| j + 1 != removed).map(|(_, &d)| d).collect()
        ).unwrap();
        let partial = BasisTransformation::local(&reduced_shape, &survivors).unwrap();

        let a = remove_screen(&change_basis(&ea, &full).unwrap(), removed).unwrap();
        let b = change_basis(&remove_screen(&ea, removed).unwrap(), &partial).unwrap();
        prop_assert!(a.alpha().matrix().max_abs_diff(b.alpha().matrix()).unwrap() <= 1e-9);
    }

    #[test]
    fn extension_then_removal_is_identity(c in counts(3, 4, 64), d in 1usize..=4, seed in any::<u64>()) {
        let ea = arrangement(&c, 3, seed);
        let phi = random_state(d, &mut rng(seed + 3));
        let ext = extend_arrangement(&ea, d, Some(&phi)).unwrap();
        let back = remove_screen(&ext, c.len() + 1).unwrap();
        prop_assert!(back.alpha().matrix().max_abs_diff(ea.alpha().matrix()).unwrap() <= 1e-10);
    }

    #[test]
    fn marginals_sum_the_joint_potentia(c in multi_counts(4, 4, 256), pick in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let ea = arrangement(&c, 2, seed);
        let removed = pick.index(c.len()) + 1;
        let marginal = remove_screen(&ea, removed).unwrap();
        for (index, p) in marginal.potentia_table() {
            let mut sum = 0.0;
            for k in 1..=c[removed - 1] {
                let mut full = index.indices().to_vec();
                full.insert(removed - 1, k);
                sum += ea.potentia(&MultiIndex::new(full)).unwrap();
            }
            prop_assert!((sum - p).abs() <= 1e-12);
        }
    }

    #[test]
    fn factorization_verifier_passes(c in counts(3, 3, 27), d in 2usize..=4, seed in any::<u64>()) {
        let ea = arrangement(&c, 2, seed);
        let r = verify_factorization_invariance_seeded(&ea, d, 3, seed).unwrap();
        prop_assert!(r.passed);
    }
}
