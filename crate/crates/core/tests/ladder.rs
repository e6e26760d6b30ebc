mod common;

use std::sync::Arc;

use ladderlab_core::ladder::{invert_g, ladder_g, Ladder, LadderSolverConfig};
use ladderlab_core::CONSTANTS;
use proptest::prelude::*;

fn ladder() -> &'static Ladder {
    static L: std::sync::OnceLock<Ladder> = std::sync::OnceLock::new();
    L.get_or_init(|| Ladder::new(Arc::new(common::fresh_cache(1e-6)), LadderSolverConfig::default()).unwrap())
}

#[test]
fn round_trips() {
    for t in [100.0, 1e3, 1e4] {
        let up = ladder().reverse(t, 1).unwrap();
        let back = ladder().ladder_value(up).unwrap();
        assert!(((back - t) / t).abs() <= 1e-9, "T={t}: {back}");
    }
}

#[test]
fn forward_undoes_reverse() {
    let chain = ladder().reverse_iterate(1e3, 3).unwrap();
    let down = ladder().forward_iterate(chain.at(3), 3).unwrap();
    assert!(((down - 1e3) / 1e3).abs() <= 1e-9);
}

#[test]
fn chain_is_increasing_with_almost_linear_increments() {
    let chain = ladder().reverse_iterate(1e4, 4).unwrap();
    assert!(chain.iterates.windows(2).all(|w| w[0] < w[1]));
    for r in 1..=4 {
        let ratio = chain.hl_increments[r - 1] / (CONSTANTS.one_minus_c * chain.at(r - 1));
        assert!((ratio - 1.0).abs() < 0.1, "r={r}: {ratio}");
    }
}

#[test]
fn phi_lags_t_by_the_expected_amount() {
    // T − φ₁(T) ~ (1−c)T/ln T
    let t = 1e4;
    let lag = t - ladder().ladder_value(t).unwrap();
    let want = CONSTANTS.one_minus_c * t / t.ln();
    assert!((lag / want - 1.0).abs() < 0.2, "{lag} vs {want}");
}

#[test]
fn below_floor_is_rejected() {
    assert!(ladder().ladder_value(50.0).is_err());
    assert!(ladder().reverse(50.0, 1).is_err());
}

#[test]
fn invert_g_round_trip() {
    let cfg = LadderSolverConfig::default();
    for y in [5.0, 100.0, 1e6] {
        let back = invert_g(ladder_g(y), &cfg).unwrap();
        assert!(((back - y) / y).abs() < 1e-12);
    }
}

#[test]
fn iterated_product_with_k1_is_plain_integral() {
    let t = 1e3;
    let l = CONSTANTS.a / CONSTANTS.one_minus_c;
    let got = ladder().iterated_product_integral(t, 1, l).unwrap();
    let lo = ladder().reverse(t, 1).unwrap();
    let hi = ladder().reverse(t + l, 1).unwrap();
    let want = ladder().cache().integrate_zeta_sq(lo, hi).unwrap();
    assert!(((got - want) / want).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn phi_is_monotone(t in 100.0f64..20_000.0, dt in 0.1f64..50.0) {
        let a = ladder().ladder_value(t).unwrap();
        let b = ladder().ladder_value(t + dt).unwrap();
        prop_assert!(a < b && b < t + dt);
    }

    #[test]
    fn reverse_round_trip(t in 100.0f64..20_000.0) {
        let up = ladder().reverse(t, 1).unwrap();
        prop_assert!(up > t);
        let back = ladder().ladder_value(up).unwrap();
        prop_assert!(((back - t) / t).abs() <= 1e-9);
    }
}
