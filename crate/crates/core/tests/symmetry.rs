//! Symmetry, hermitian and normality verdicts over the PPF family and outside it.

use proptest::prelude::*;
use wco::cli::verify::normality_condition_gap;
use wco::operator::{
    build_matrix, classify, default_grid, hermitian_residual, normality_residual_grid,
    transpose_symmetry_residual, Tolerances,
};
use wco::{Complex64, OperatorMatrix, PPFParams, TruncatedSeries, WeightSequence};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn matrix(p: &PPFParams, n: usize) -> OperatorMatrix {
    build_matrix(
        &p.phi_series(n - 1),
        &p.psi_series(n - 1),
        &WeightSequence::beta_kappa(p.kappa, n - 1).unwrap(),
        n,
    )
    .unwrap()
}

fn disk(r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU)
        .prop_map(move |(u, t)| Complex64::from_polar(r * u.sqrt(), t))
}

fn kappa() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(1.5), Just(2.0), Just(3.0)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ppf_symbols_are_transpose_symmetric(a0 in disk(0.6), a1 in disk(0.5), b in disk(2.0), k in kappa()) {
        let p = PPFParams::new(a0, a1, b, k);
        prop_assume!(p.is_ok());
        let m = matrix(&p.unwrap(), 24);
        prop_assert!(transpose_symmetry_residual(&m) <= 1e-12 * m.max_entry().max(1.0));
    }

    #[test]
    fn real_parameters_are_hermitian(a0 in -0.5..0.5f64, a1 in -0.4..0.4f64, b in -2.0..2.0f64, k in kappa()) {
        let p = PPFParams::new(c(a0, 0.0), c(a1, 0.0), c(b, 0.0), k);
        prop_assume!(p.is_ok());
        let m = matrix(&p.unwrap(), 24);
        prop_assert!(hermitian_residual(&m) <= 1e-12 * m.max_entry().max(1.0));
    }

    #[test]
    fn condition_predicts_normality(a0 in disk(0.5), a1 in disk(0.4), b in disk(2.0), k in kappa()) {
        let p = PPFParams::new(a0, a1, b, k);
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        let r = normality_residual_grid(&p, &default_grid(5)).unwrap();
        // Generic samples violate the condition; the grid must see it.
        let gap = normality_condition_gap(&p);
        prop_assume!(gap > 1e-6);
        prop_assert!(r > 1e-10, "gap {gap}, residual {r}");
    }

    #[test]
    fn psi_nonvanishing_and_phi_injective(a0 in disk(0.5), a1 in disk(0.4), b in disk(2.0), z in disk(0.95), w in disk(0.95)) {
        let p = PPFParams::new(a0, a1, b, 1.0);
        prop_assume!(p.is_ok() && b.norm() > 1e-3 && a1.norm() > 1e-3 && (z - w).norm() > 1e-3);
        let p = p.unwrap();
        prop_assert!(p.psi(z).norm() > 0.0);
        prop_assert!((p.phi(z) - p.phi(w)).norm() > 0.0);
    }
}

#[test]
fn perturbing_any_real_parameter_breaks_hermitian() {
    let rot = Complex64::from_polar(1.0, 1e-3);
    let base = PPFParams::new(c(0.2, 0.0), c(0.5, 0.0), c(1.0, 0.0), 1.0).unwrap();
    for which in 0..3 {
        let mut q = base;
        match which {
            0 => q.a0 *= rot,
            1 => q.a1 *= rot,
            _ => q.b *= rot,
        }
        let q = PPFParams::new(q.a0, q.a1, q.b, 1.0).unwrap();
        let m = matrix(&q, 32);
        assert!(hermitian_residual(&m) > 1e-5, "parameter {which}");
        assert!(transpose_symmetry_residual(&m) <= 1e-12);
    }
}

#[test]
fn normality_examples_through_classifier() {
    let grid = default_grid(5);
    let tol = Tolerances::default();
    let verdicts = |a0: Complex64, a1: Complex64, b: Complex64| {
        let p = PPFParams::new(a0, a1, b, 1.0).unwrap();
        classify(&matrix(&p, 32), 1.0, &grid, tol).unwrap().verdicts
    };
    let holds = verdicts(c(0.0, 0.5), c(0.75, 0.0), c(1.0, 0.0));
    assert!(holds.complex_symmetric_standard_j && holds.normal && !holds.hermitian);
    let fails = verdicts(c(0.0, 0.5), c(0.25, 0.0), c(1.0, 0.0));
    assert!(fails.complex_symmetric_standard_j && !fails.normal && !fails.hermitian);
    let real = verdicts(c(0.3, 0.0), c(0.4, 0.0), c(1.0, 0.0));
    assert!(real.complex_symmetric_standard_j && real.normal && real.hermitian);
}

#[test]
fn normal_iff_condition_on_constructed_samples() {
    // Im(a0 conj a1) = (1 - |a0|²) Im a0 solved for Im a1.
    let grid = default_grid(5);
    for (a0, x) in [
        (c(0.3, 0.2), 0.1),
        (c(-0.3, -0.2), 0.3),
        (c(0.4, -0.1), -0.3),
        (c(0.25, 0.25), 0.2),
    ] {
        let y = (a0.im * x - (1.0 - a0.norm_sqr()) * a0.im) / a0.re;
        for k in [1.0, 2.0, 3.0] {
            let p = PPFParams::new(a0, c(x, y), c(0.7, -0.4), k).unwrap();
            assert!(normality_condition_gap(&p) < 1e-15);
            assert!(
                normality_residual_grid(&p, &grid).unwrap() <= 1e-12,
                "a0 {a0} kappa {k}"
            );
        }
    }
}

#[test]
fn classifier_recognizes_series_input() {
    let p = PPFParams::new(c(0.1, 0.2), c(0.5, -0.1), c(1.0, 0.5), 2.0).unwrap();
    let r = classify(
        &matrix(&p, 32),
        2.0,
        &default_grid(5),
        Tolerances::default(),
    )
    .unwrap();
    assert_eq!(r.ppf, Some(p));
    assert_eq!(r.normality_method, "kernel-grid");

    // Same φ with a ψ outside the family.
    let n = 32;
    let psi = TruncatedSeries::from_real(&[1.0, 0.3, 0.2], n - 1);
    let m = build_matrix(
        &p.phi_series(n - 1),
        &psi,
        &WeightSequence::beta_kappa(2.0, n - 1).unwrap(),
        n,
    )
    .unwrap();
    let r = classify(&m, 2.0, &default_grid(5), Tolerances::default()).unwrap();
    assert!(r.ppf.is_none());
    assert!(!r.verdicts.complex_symmetric_standard_j);
}

#[test]
fn unweighted_symmetric_only_for_linear_maps() {
    let n = 32;
    let h = WeightSequence::hardy(n - 1);
    let one = TruncatedSeries::one(n - 1);
    for a0 in [c(0.1, 0.0), c(0.0, 0.2), c(0.3, 0.0), c(-0.25, 0.1)] {
        let p = PPFParams::new(a0, c(0.3, 0.0), c(1.0, 0.0), 1.0).unwrap();
        let m = build_matrix(&p.phi_series(n - 1), &one, &h, n).unwrap();
        // Entry (0, 1) is φ(0) = a0 while entry (1, 0) is [z]ψ = 0.
        assert!(transpose_symmetry_residual(&m) >= a0.norm() - 1e-15);
        assert!(transpose_symmetry_residual(&m) > 1e-2);
    }
    for a in [c(0.5, 0.0), c(-0.3, 0.6), c(0.0, 0.9)] {
        let m = build_matrix(&TruncatedSeries::monomial(1, a, n - 1), &one, &h, n).unwrap();
        assert_eq!(transpose_symmetry_residual(&m), 0.0);
    }
}

#[test]
fn weighted_spaces_keep_symmetry_for_matching_kappa_only() {
    // The family for κ = 2 is not symmetric on the κ = 1 space.
    let p = PPFParams::new(c(0.3, 0.1), c(0.4, 0.0), c(1.0, 0.0), 2.0).unwrap();
    let n = 24;
    let m = build_matrix(
        &p.phi_series(n - 1),
        &p.psi_series(n - 1),
        &WeightSequence::hardy(n - 1),
        n,
    )
    .unwrap();
    assert!(transpose_symmetry_residual(&m) > 1e-3);
}
