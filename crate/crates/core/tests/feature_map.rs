mod common;

use std::f64::consts::PI;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use qsvm::feature_map::{data_map_phi, expand_terms};
use qsvm::kernels::quantum_kernel;
use qsvm::{build_feature_state, DataMap, FeatureMapSpec};

fn oracle_state(paulis: &[&str], alpha: f64, depth: usize, x: &[f64]) -> Vec<Complex64> {
    mat_vec(&feature_map_unitary(paulis, alpha, depth, x), &zero_state(x.len()))
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn z_zz_depth2_fixed_point() {
    let x = [0.5, 1.2];
    let got = build_feature_state(&x, &FeatureMapSpec::new(&["Z", "ZZ"], 1.0)).unwrap();
    assert!(max_diff(got.amplitudes(), &oracle_state(&["Z", "ZZ"], 1.0, 2, &x)) < 1e-10);
}

#[test]
fn fixed_kernel_value_matches_oracle() {
    let (x, z) = ([0.5, 1.2], [2.0, 0.3]);
    let spec = FeatureMapSpec::new(&["Z", "ZZ"], 2.0);
    let a = oracle_state(&["Z", "ZZ"], 2.0, 2, &x);
    let b = oracle_state(&["Z", "ZZ"], 2.0, 2, &z);
    let want = a.iter().zip(&b).map(|(p, q)| p.conj() * q).sum::<Complex64>().norm_sqr();
    assert!((quantum_kernel(&x, &z, &spec).unwrap() - want).abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn z_zz_states_match_circuit_unitary(
        x in prop::collection::vec(0.0f64..2.0 * PI, 2),
        alpha in 0.0f64..3.0,
    ) {
        let got = build_feature_state(&x, &FeatureMapSpec::new(&["Z", "ZZ"], alpha)).unwrap();
        prop_assert!(max_diff(got.amplitudes(), &oracle_state(&["Z", "ZZ"], alpha, 2, &x)) < 1e-10);
    }

    #[test]
    fn other_families_match_circuit_unitary(
        x in prop::collection::vec(0.0f64..2.0 * PI, 3),
        alpha in 0.0f64..3.0,
        depth in 1usize..=3,
        family in prop::sample::select(vec![
            vec!["Y"], vec!["X"], vec!["YY"], vec!["Y", "YY"], vec!["X", "ZZ"], vec!["Z", "XY"],
        ]),
    ) {
        let spec = FeatureMapSpec::new(&family, alpha).with_depth(depth);
        let got = build_feature_state(&x, &spec).unwrap();
        prop_assert!(max_diff(got.amplitudes(), &oracle_state(&family, alpha, depth, &x)) < 1e-10);
        prop_assert!((got.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_alpha_gives_uniform_superposition(x in prop::collection::vec(0.0f64..2.0 * PI, 2)) {
        let s = build_feature_state(&x, &FeatureMapSpec::new(&["Z", "ZZ"], 0.0).with_depth(1)).unwrap();
        for a in s.amplitudes() {
            prop_assert!((a - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        }
    }
}

#[test]
fn expansion_examples() {
    let names = |spec: &FeatureMapSpec, n| -> Vec<String> {
        expand_terms(spec, n).unwrap().iter().map(|t| t.pauli.to_string()).collect()
    };
    assert_eq!(names(&FeatureMapSpec::new(&["Z"], 1.0), 2), ["Z0", "Z1"]);
    assert_eq!(names(&FeatureMapSpec::new(&["Z", "ZZ"], 1.0), 2), ["Z0", "Z1", "Z0Z1"]);
    assert_eq!(names(&FeatureMapSpec::new(&["YY"], 1.0), 3), ["Y0Y1", "Y0Y2", "Y1Y2"]);
    assert!(expand_terms(&FeatureMapSpec::new(&["ZZZ"], 1.0), 2).is_err());
}

#[test]
fn data_map_examples() {
    assert_eq!(data_map_phi(&[0], &[0.7, 1.3], DataMap::ProductShifted).unwrap(), 0.7);
    assert_eq!(data_map_phi(&[0, 1], &[PI, 2.0], DataMap::ProductShifted).unwrap(), 0.0);
    assert_eq!(data_map_phi(&[0, 1], &[1.0, 2.0], DataMap::PlainProduct).unwrap(), 2.0);
    assert!(matches!(
        data_map_phi(&[0, 1, 2], &[1.0, 2.0, 3.0], DataMap::PlainProduct),
        Err(qsvm::Error::UnsupportedTerm(_))
    ));
}

#[test]
fn three_local_terms_are_unsupported() {
    let err = build_feature_state(&[1.0, 2.0, 3.0], &FeatureMapSpec::new(&["ZZZ"], 1.0)).unwrap_err();
    assert!(matches!(err, qsvm::Error::UnsupportedTerm(_)));
}

#[test]
fn zero_angles_leave_uniform_state() {
    let s = build_feature_state(&[0.0, 0.0], &FeatureMapSpec::new(&["Z"], 1.0).with_depth(1)).unwrap();
    for a in s.amplitudes() {
        assert!((a - Complex64::new(0.5, 0.0)).norm() < 1e-12);
    }
}
