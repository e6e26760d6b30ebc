mod common;

use ladderlab_core::puzzles::{builtin_vectors_k4, evaluate_puzzle, power_form, PuzzleVector};
use ladderlab_core::verification::{
    evaluate_formula, fermat_functional, functional_f, write_csv, FermatRational, FormulaId, Params, Q2Mode,
    Q2Region,
};
use proptest::prelude::*;

fn lab() -> &'static ladderlab_core::verification::Lab {
    static LAB: std::sync::OnceLock<ladderlab_core::verification::Lab> = std::sync::OnceLock::new();
    LAB.get_or_init(common::small_lab)
}

#[test]
fn every_formula_evaluates() {
    for id in FormulaId::ALL {
        let mut params = Params::new().with(id.height_param(), 2e3);
        if id == FormulaId::E3_17 {
            params = params.with("x", 6.0).with("y", 8.0).with("z", 9.0).with("n", 3.0);
        }
        let r = evaluate_formula(lab(), id, &params).unwrap_or_else(|e| panic!("{id}: {e}"));
        assert!(r.ratio.is_finite() && r.ratio > 0.0, "{id}: {}", r.ratio);
    }
}

#[test]
fn q2_modes_agree() {
    let region = Q2Region::new(lab(), 2e3).unwrap();
    let sep = region.integral(lab(), Q2Mode::Separable).unwrap();
    let grid = region.integral(lab(), Q2Mode::Grid2d).unwrap();
    assert!(((sep - grid) / sep).abs() <= 2e-6, "{sep} vs {grid}");
}

#[test]
fn q2_below_floor_is_invalid() {
    assert!(Q2Region::new(lab(), 5.0).is_err());
}

#[test]
fn functional_scaling_identity() {
    let tau = 3e3;
    for x in [0.5, 2.0] {
        let lhs = functional_f(lab(), x, tau).unwrap() * tau;
        let rhs = functional_f(lab(), 1.0, x * tau).unwrap() * x * tau;
        assert!(((lhs - rhs) / rhs).abs() <= 1e-12);
    }
}

#[test]
fn fermat_verdicts_are_exact() {
    let q = FermatRational::new(6, 8, 9, 3).unwrap();
    assert!(!q.is_exactly_one());
    assert_eq!(q.to_string(), "728/729");
    let t = fermat_functional(lab(), &q, &[1e3, 3e3]).unwrap();
    assert_eq!(t.verdict(), "value=728/729, exact≠1");
    assert!(FermatRational::new(3, 4, 5, 2).is_err());
}

#[test]
fn fermat_trend_targets_two() {
    let q = FermatRational::new(1, 1, 1, 3).unwrap();
    let t = fermat_functional(lab(), &q, &[1e3, 4e3]).unwrap();
    assert!(t.targets_value);
    assert!(t.distance_from_one.last().unwrap() > &0.5);
}

#[test]
fn unknown_parameters_do_not_leak_into_reports() {
    let params = Params::new().with("T", 1e3).with("r", 2.0);
    let r = evaluate_formula(lab(), FormulaId::E2_6, &params).unwrap();
    assert_eq!(r.params.joined(), "T=1000;r=2");
    let mut out = Vec::new();
    write_csv(&mut out, &[r], false).unwrap();
    assert!(String::from_utf8(out).unwrap().starts_with("formula,params,lhs,rhs,ratio,elapsed_ms\nE2.6,T=1000;r=2,"));
}

#[test]
fn bad_parameters_are_rejected() {
    let e = |id: FormulaId, p: Params| evaluate_formula(lab(), id, &p).is_err();
    assert!(e(FormulaId::E2_6, Params::new()));
    assert!(e(FormulaId::E2_6, Params::new().with("T", 1e3).with("r", 1.5)));
    assert!(e(FormulaId::E5_5, Params::new().with("T", 1e3).with("mode", 7.0)));
    assert!(e(FormulaId::E3_17, Params::new().with("tau", 1e3).with("x", 3.0).with("y", 4.0).with("z", 5.0).with("n", 2.0)));
}

#[test]
fn power_form_matches_product() {
    let v = &builtin_vectors_k4()[4];
    let product = evaluate_puzzle(lab(), 2e3, v).unwrap().rhs;
    let power = power_form(lab(), 2e3, 1.125, 4).unwrap();
    assert!(((product - power) / power).abs() <= 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn puzzle_is_permutation_invariant(seed in 0usize..24, which in 0usize..5) {
        let base = builtin_vectors_k4()[which].exponents().to_vec();
        let mut perm = base.clone();
        let mut s = seed;
        for i in (1..perm.len()).rev() {
            perm.swap(i, s % (i + 1));
            s /= i + 1;
        }
        let a = evaluate_puzzle(lab(), 1e3, &PuzzleVector::new(base).unwrap()).unwrap();
        let b = evaluate_puzzle(lab(), 1e3, &PuzzleVector::new(perm).unwrap()).unwrap();
        prop_assert_eq!(a.lhs, b.lhs);
        prop_assert!(((a.rhs - b.rhs) / a.rhs).abs() <= 1e-12);
    }
}
