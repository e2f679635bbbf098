mod common;

use common::*;
use multiscreen::isa::{
    build_powers_graph, commutes, potentia_of_projector, validate_isa, verify_additivity, GeneralProjector,
    GlobalIntensiveValuation, Power,
};
use multiscreen::random::{random_orthogonal_family, random_projector};
use multiscreen::tensor::hermitian_eigendecomposition;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_arrangements_satisfy_the_conditions(c in counts(3, 4, 36), terms in 1usize..=4, seed in any::<u64>()) {
        let ea = arrangement(&c, terms, seed);
        let m = ea.alpha().matrix();
        prop_assert!(m.hermiticity_deviation() <= 1e-10);
        prop_assert!((m.trace().re - 1.0).abs() <= 1e-10);
        let e = hermitian_eigendecomposition(m).unwrap();
        prop_assert!(e.eigenvalues.iter().all(|&l| l >= -1e-10));
        prop_assert!(validate_isa(ea.alpha()).is_valid());
    }

    #[test]
    fn potentia_sum_to_one(c in counts(4, 3, 81), terms in 1usize..=4, seed in any::<u64>()) {
        let ea = arrangement(&c, terms, seed);
        let mut total = 0.0;
        for index in ea.shape().multi_indices() {
            let p = ea.potentia_of_power(&Power::new(ea.shape().clone(), index).unwrap()).unwrap();
            prop_assert!((-1e-10..=1.0 + 1e-10).contains(&p));
            total += p;
        }
        prop_assert!((total - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn complementary_projectors(c in counts(3, 3, 27), rank in 0usize..=27, seed in any::<u64>()) {
        let ea = arrangement(&c, 3, seed);
        let n = ea.degree_of_complexity();
        let giv = GlobalIntensiveValuation::new(&ea);
        let p = random_projector(n, rank.min(n), &mut rng(seed ^ 0x5eed));
        let a = potentia_of_projector(&giv, &p).unwrap();
        let b = potentia_of_projector(&giv, &p.complement()).unwrap();
        prop_assert!((a + b - 1.0).abs() <= 1e-8);
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&a));
        prop_assert!((giv.value(&GeneralProjector::identity(n)).unwrap() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn purity_definitions_agree(c in counts(3, 3, 27), terms in 1usize..=4, seed in any::<u64>()) {
        let ea = arrangement(&c, terms, seed);
        prop_assert_eq!(ea.purity_abstract().is_pure, ea.purity_operational().certain_power_exists);
        if terms == 1 {
            prop_assert!(ea.purity_abstract().is_pure);
        }
    }

    #[test]
    fn orthogonal_families_are_additive(log_n in 1u32..=6, seed in any::<u64>()) {
        let n = 1usize << log_n;
        let mut r = rng(seed);
        let ea = arrangement(&[n], 3, seed);
        let family = random_orthogonal_family(n, &mut r);
        let report = verify_additivity(&GlobalIntensiveValuation::new(&ea), &family).unwrap();
        prop_assert!(report.passed && report.residual <= 1e-8);
    }

    #[test]
    fn graph_edges_follow_commutators(n in 2usize..=6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut vertices = random_orthogonal_family(n, &mut r);
        let extra: Vec<_> = vertices.iter().map(GeneralProjector::complement).collect();
        vertices.extend(extra);
        vertices.push(random_projector(n, 1, &mut r));
        vertices.push(GeneralProjector::identity(n));
        let count = vertices.len();
        let graph = build_powers_graph(vertices.clone()).unwrap();
        for a in 0..count {
            prop_assert!(!graph.has_edge(a, a));
            for b in 0..count {
                prop_assert_eq!(graph.has_edge(a, b), graph.has_edge(b, a));
                if a != b {
                    let (pa, pb) = (vertices[a].matrix(), vertices[b].matrix());
                    let commutator = pa.matmul(pb).unwrap().sub(&pb.matmul(pa).unwrap()).unwrap().max_abs();
                    prop_assert_eq!(graph.has_edge(a, b), commutator <= 1e-9);
                    prop_assert_eq!(commutes(&vertices[a], &vertices[b]).unwrap(), commutator <= 1e-9);
                }
            }
        }
        prop_assert_eq!(graph.degree(count - 1), count - 1);
    }
}

#[test]
fn overlapping_family_is_rejected() {
    let ea = arrangement(&[4], 2, 1);
    let p = random_projector(4, 2, &mut rng(2));
    let err = verify_additivity(&GlobalIntensiveValuation::new(&ea), &[p.clone(), p]).unwrap_err();
    assert_eq!(err.category(), multiscreen::ErrorCategory::Numeric);
}
