mod common;

use ladderlab_core::quadrature::{integrate, IntegralCache, QuadratureConfig};
use ladderlab_core::CONSTANTS;
use proptest::prelude::*;
use std::f64::consts::PI;

// 20-digit mpmath siegelz², GL-20 on 0.25- and 0.125-wide panels.
const SEGMENT_1E4: f64 = 835.225_620_441_649_35;

fn main_term(t: f64) -> f64 {
    t * (t / (2.0 * PI)).ln() + (2.0 * CONSTANTS.c - 1.0) * t
}

#[test]
fn segment_matches_oracle() {
    let cache = common::fresh_cache(1e-6);
    let got = cache.integrate_zeta_sq(1e4, 1e4 + 100.0).unwrap();
    assert!(((got - SEGMENT_1E4) / SEGMENT_1E4).abs() < 1e-7, "{got}");
}

#[test]
fn hardy_littlewood_main_term() {
    let cache = common::fresh_cache(1e-6);
    let j = cache.hl_integral(1e4).unwrap();
    assert!((j / main_term(1e4) - 1.0).abs() < 0.01, "J(1e4) = {j}");
}

#[test]
fn mean_value_over_a_window() {
    let cache = common::fresh_cache(1e-6);
    let (t, h) = (1e5, 2000.0);
    let got = cache.integrate_zeta_sq(t, t + h).unwrap();
    let want = h * ((t / (2.0 * PI)).ln() + 2.0 * CONSTANTS.c);
    assert!((got / want - 1.0).abs() < 0.05, "{got} vs {want}");
}

#[test]
fn tighter_tolerance_agrees() {
    let coarse = common::fresh_cache(1e-6).hl_integral(1e4).unwrap();
    let fine = common::fresh_cache(5e-7).hl_integral(1e4).unwrap();
    assert!(((coarse - fine) / fine).abs() <= 1e-6);
}

#[test]
fn grid_and_direct_integrals_agree() {
    let cache = common::fresh_cache(1e-6);
    let via_grid = cache.hl_integral(3000.5).unwrap() - cache.hl_integral(1000.25).unwrap();
    let direct = cache.integrate_zeta_sq(1000.25, 3000.5).unwrap();
    assert!(((via_grid - direct) / direct).abs() < 2e-6);
}

#[test]
fn checkpoints_rederive() {
    let cache = common::fresh_cache(1e-6);
    cache.extend_to(5000.0).unwrap();
    for i in [1, cache.len() / 2, cache.len() - 1] {
        assert!(cache.rederive(i).unwrap() <= 1e-6);
    }
}

#[test]
fn persisted_cache_reopens() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hl.jljc");
    let first = common::persistent_cache(&path);
    let j = first.hl_integral(2000.0).unwrap();
    first.save(&path).unwrap();
    let again = common::persistent_cache(&path);
    assert_eq!(again.len(), first.len());
    assert_eq!(again.hl_integral(2000.0).unwrap(), j);
}

#[test]
fn corrupt_cache_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hl.jljc");
    let cache = common::persistent_cache(&path);
    cache.extend_to(500.0).unwrap();
    cache.save(&path).unwrap();
    let mut bytes = std::fs::read(&path).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0x40;
    std::fs::write(&path, bytes).unwrap();
    let err = IntegralCache::load(common::evaluator(), QuadratureConfig::default(), &path).unwrap_err();
    assert!(err.to_string().contains("checksum mismatch"), "{err}");
}

#[test]
fn polynomial_integrals_are_exact() {
    let cfg = QuadratureConfig::default();
    let got = integrate(|x| Ok(x.powi(5) - 3.0 * x), 0.0, 2.0, &cfg).unwrap();
    assert!((got - (64.0 / 6.0 - 6.0)).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn additivity(a in 100.0f64..5000.0, w1 in 1.0f64..500.0, w2 in 1.0f64..500.0) {
        let cache = common::fresh_cache(1e-6);
        let (b, c) = (a + w1, a + w1 + w2);
        let whole = cache.integrate_zeta_sq(a, c).unwrap();
        let parts = cache.integrate_zeta_sq(a, b).unwrap() + cache.integrate_zeta_sq(b, c).unwrap();
        prop_assert!(((whole - parts) / whole).abs() <= 2e-6);
    }

    #[test]
    fn hl_integral_is_monotone(t in 10.0f64..5000.0, dt in 0.01f64..100.0) {
        let cache = common::fresh_cache(1e-6);
        prop_assert!(cache.hl_integral(t).unwrap() < cache.hl_integral(t + dt).unwrap());
    }
}
