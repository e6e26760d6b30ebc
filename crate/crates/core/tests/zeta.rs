mod common;

use ladderlab_core::zeta::theta;
use proptest::prelude::*;

// mpmath siegelz at 30 digits
const Z_REF: [(f64, f64); 5] = [
    (30.0, 0.596_028_519_239_884_96),
    (199.9, 5.819_488_059_669_554_5),
    (250.5, -1.175_862_516_922_561_8),
    (1000.25, 2.041_033_000_698_968_6),
    (100_000.1, 7.189_473_201_894_225_7),
];

fn sign_changes(lo: f64, hi: f64, step: f64) -> usize {
    let ev = common::evaluator();
    let n = ((hi - lo) / step).round() as usize;
    let mut prev = ev.hardy_z(lo).unwrap();
    let mut count = 0;
    for i in 1..=n {
        let z = ev.hardy_z(lo + step * i as f64).unwrap();
        if z.signum() != prev.signum() {
            count += 1;
        }
        prev = z;
    }
    count
}

#[test]
fn hardy_z_reference_values() {
    let ev = common::evaluator();
    for (t, want) in Z_REF {
        let got = ev.hardy_z(t).unwrap();
        assert!((got - want).abs() < 1e-8, "Z({t}) = {got}, want {want}");
    }
}

#[test]
fn first_ten_zeros() {
    let ev = common::evaluator();
    for t in common::ZEROS {
        let z = ev.hardy_z(t).unwrap();
        assert!(z.abs() < 1e-9, "Z({t}) = {z}");
    }
}

#[test]
fn zero_counts() {
    assert_eq!(sign_changes(2.0, 100.0, 0.01), 29);
    assert_eq!(sign_changes(2.0, 1000.0, 0.01), 649);
}

#[test]
fn gram_points() {
    // theta vanishes at g₀ and equals 100π at g₁₀₀
    let g0 = 17.845_599_540_410_861;
    let g100 = 238.582_590_514_502_92;
    assert!(theta(g0).unwrap().abs() < 1e-12);
    assert!((theta(g100).unwrap() - 100.0 * std::f64::consts::PI).abs() < 1e-10);
}

#[test]
fn methods_agree_across_the_switch() {
    let ev = common::evaluator();
    for t in [200.0, 250.5, 400.0, 999.0] {
        let em = ev.hardy_z_euler_maclaurin(t).unwrap();
        let rs = ev.hardy_z_riemann_siegel(t).unwrap();
        assert!((em - rs).abs() < 1e-8, "t={t}: {em} vs {rs}");
    }
}

#[test]
fn range_errors() {
    let ev = common::evaluator();
    assert!(ev.hardy_z(1.0).is_err());
    assert!(ev.hardy_z(f64::NAN).is_err());
    let err = ev.hardy_z(2e7).unwrap_err().to_string();
    assert!(err.contains("zeta range"), "{err}");
}

proptest! {
    #[test]
    fn modulus_sq_is_nonnegative_and_consistent(t in 0.0f64..1e6) {
        let ev = common::evaluator();
        let m = ev.modulus_sq(t).unwrap();
        prop_assert!(m >= 0.0 && m.is_finite());
        if t >= 2.0 {
            let z = ev.zeta_sq(t).unwrap();
            prop_assert!((m - z).abs() <= 1e-9 * (1.0 + z));
        }
    }
}
