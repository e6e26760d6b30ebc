#![allow(dead_code)]

use std::path::Path;
use std::sync::{Arc, OnceLock};

use ladderlab_core::ladder::{Ladder, LadderSolverConfig};
use ladderlab_core::prime::PrimeStore;
use ladderlab_core::quadrature::{IntegralCache, QuadratureConfig};
use ladderlab_core::verification::Lab;
use ladderlab_core::zeta::{CriticalLineEvaluator, EvaluatorConfig};

/// First ten zero ordinates, from a 30-digit mpmath `zetazero` run.
#[allow(clippy::excessive_precision)]
pub const ZEROS: [f64; 10] = [
    14.134725141734694,
    21.022039638771555,
    25.010857580145689,
    30.424876125859513,
    32.935061587739190,
    37.586178158825671,
    40.918719012147495,
    43.327073280914999,
    48.005150881167160,
    49.773832477672302,
];

pub fn evaluator() -> CriticalLineEvaluator {
    CriticalLineEvaluator::new(EvaluatorConfig::default()).unwrap()
}

pub fn fresh_cache(rel_tol: f64) -> IntegralCache {
    let quad = QuadratureConfig { rel_tol, ..Default::default() };
    IntegralCache::new(evaluator(), quad).unwrap()
}

pub fn store(limit: u64) -> Arc<PrimeStore> {
    Arc::new(PrimeStore::build(limit).unwrap())
}

/// Shared sieve up to 10⁷ for the lighter tests.
pub fn small_store() -> Arc<PrimeStore> {
    static STORE: OnceLock<Arc<PrimeStore>> = OnceLock::new();
    STORE.get_or_init(|| store(10_000_000)).clone()
}

pub fn lab_with(store: Arc<PrimeStore>, cache: IntegralCache, t_min: f64) -> Lab {
    let cfg = LadderSolverConfig { t_min, ..Default::default() };
    Lab::new(store, Ladder::new(Arc::new(cache), cfg).unwrap())
}

pub fn small_lab() -> Lab {
    lab_with(small_store(), fresh_cache(1e-6), 10.0)
}

/// Opens (or starts) a persistent cache at `path`.
pub fn persistent_cache(path: &Path) -> IntegralCache {
    IntegralCache::open(evaluator(), QuadratureConfig::default(), path).unwrap()
}
