//! The Hardy–Littlewood integral `J(T) = ∫₀^T |ζ(½+it)|² dt` on a persistent
//! checkpoint grid.

use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::sync::RwLock;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::integrate::{Integrator, QuadratureConfig};
use crate::error::{LabError, Result};
use crate::zeta::{CriticalLineEvaluator, EvaluatorConfig};

const MAGIC: &[u8; 4] = b"JLJC";
const VERSION: u32 = 1;
const HEADER: usize = 4 + 4 + 8 + 8;

// Checkpoints are spaced max(1, t/10⁴); the grid does not depend on queries.
const RELATIVE_SPACING: f64 = 1e-4;
// Segments integrated per parallel batch while extending.
const BATCH: usize = 2048;

fn next_checkpoint(t: f64) -> f64 {
    t + (t * RELATIVE_SPACING).max(1.0)
}

/// Hash of every setting that changes the stored values.
pub fn fingerprint(quad: &QuadratureConfig, eval: &EvaluatorConfig) -> u64 {
    let mut h = Sha256::new();
    h.update(b"ladderlab-hl-v1");
    h.update(quad.rel_tol.to_le_bytes());
    h.update((quad.nodes_per_oscillation as u64).to_le_bytes());
    h.update((quad.panel_order as u64).to_le_bytes());
    h.update(eval.switch_height.to_le_bytes());
    h.update((eval.rs_correction_terms as u64).to_le_bytes());
    h.update((eval.em_terms as u64).to_le_bytes());
    h.update(RELATIVE_SPACING.to_le_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().unwrap())
}

/// Monotone checkpoint grid of `(t, J(t))` starting at `(0, 0)`.
///
/// Reads take a shared lock; extension is exclusive and append-only.
#[derive(Debug)]
pub struct IntegralCache {
    evaluator: CriticalLineEvaluator,
    integrator: Integrator,
    fingerprint: u64,
    grid: RwLock<Vec<(f64, f64)>>,
}

impl IntegralCache {
    pub fn new(evaluator: CriticalLineEvaluator, quad: QuadratureConfig) -> Result<Self> {
        let integrator = Integrator::new(quad)?;
        let fingerprint = fingerprint(&quad, evaluator.config());
        Ok(IntegralCache { evaluator, integrator, fingerprint, grid: RwLock::new(vec![(0.0, 0.0)]) })
    }

    pub fn evaluator(&self) -> &CriticalLineEvaluator {
        &self.evaluator
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        self.integrator.config()
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn len(&self) -> usize {
        self.grid.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Height of the last stored checkpoint.
    pub fn covered(&self) -> f64 {
        self.grid.read().unwrap().last().unwrap().0
    }

    pub fn checkpoints(&self) -> Vec<(f64, f64)> {
        self.grid.read().unwrap().clone()
    }

    /// `∫_a^b |ζ(½+it)|² dt` computed directly, without the grid.
    pub fn integrate_zeta_sq(&self, a: f64, b: f64) -> Result<f64> {
        self.check_height(b)?;
        self.integrator.integrate(|t| self.evaluator.modulus_sq(t), a, b)
    }

    fn check_height(&self, t: f64) -> Result<()> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(LabError::invalid(format!("J(T) needs T >= 0, got {t}")));
        }
        if t > self.evaluator.max_height() {
            return Err(LabError::Capacity {
                resource: "zeta range",
                required: t,
                available: self.evaluator.max_height(),
            });
        }
        Ok(())
    }

    /// `J(T)`: the last checkpoint at or below `T` plus the remaining segment.
    pub fn hl_integral(&self, t: f64) -> Result<f64> {
        self.check_height(t)?;
        self.extend_to(t)?;
        let (t0, j0) = {
            let grid = self.grid.read().unwrap();
            let i = grid.partition_point(|&(x, _)| x <= t) - 1;
            grid[i]
        };
        if t0 == t {
            return Ok(j0);
        }
        Ok(j0 + self.integrator.integrate(|x| self.evaluator.modulus_sq(x), t0, t)?)
    }

    /// Appends checkpoints until the next one would pass `t`.
    pub fn extend_to(&self, t: f64) -> Result<()> {
        self.check_height(t)?;
        if next_checkpoint(self.covered()) > t {
            return Ok(());
        }
        let mut grid = self.grid.write().unwrap();
        loop {
            let &(last, _) = grid.last().unwrap();
            let mut bounds = vec![last];
            while bounds.len() <= BATCH {
                let next = next_checkpoint(*bounds.last().unwrap());
                if next > t {
                    break;
                }
                bounds.push(next);
            }
            if bounds.len() == 1 {
                return Ok(());
            }
            let segments: Vec<Result<f64>> = bounds
                .par_windows(2)
                .map(|w| self.integrator.integrate_serial(|x| self.evaluator.modulus_sq(x), w[0], w[1]))
                .collect();
            for (i, seg) in segments.into_iter().enumerate() {
                let j = grid.last().unwrap().1 + seg?;
                grid.push((bounds[i + 1], j));
            }
        }
    }

    /// Recomputes checkpoint `i` from checkpoint `i − 1` and returns the
    /// relative difference from the stored value.
    pub fn rederive(&self, i: usize) -> Result<f64> {
        let (prev, cur) = {
            let grid = self.grid.read().unwrap();
            if i == 0 || i >= grid.len() {
                return Err(LabError::invalid(format!("checkpoint index {i} out of range")));
            }
            (grid[i - 1], grid[i])
        };
        let seg = self.integrator.integrate_serial(|x| self.evaluator.modulus_sq(x), prev.0, cur.0)?;
        let j = prev.1 + seg;
        Ok((j - cur.1).abs() / cur.1.abs().max(f64::MIN_POSITIVE))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let grid = self.grid.read().unwrap();
        let mut out = Vec::with_capacity(HEADER + 16 * grid.len() + 4);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.fingerprint.to_le_bytes());
        out.extend_from_slice(&(grid.len() as u64).to_le_bytes());
        for &(t, j) in grid.iter() {
            out.extend_from_slice(&t.to_le_bytes());
            out.extend_from_slice(&j.to_le_bytes());
        }
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        out
    }

    /// Restores a grid written by [`to_bytes`](Self::to_bytes); the stored
    /// fingerprint must match this cache's configuration.
    pub fn from_bytes(
        evaluator: CriticalLineEvaluator,
        quad: QuadratureConfig,
        bytes: &[u8],
    ) -> Result<Self> {
        let bad = |m: &str| LabError::Integrity(format!("integral cache: {m}"));
        if bytes.len() < HEADER + 4 || &bytes[..4] != MAGIC {
            return Err(bad("bad magic or truncated file"));
        }
        let (body, tail) = bytes.split_at(bytes.len() - 4);
        if crc32fast::hash(body) != u32::from_le_bytes(tail.try_into().unwrap()) {
            return Err(bad("checksum mismatch"));
        }
        let u64_at = |o: usize| u64::from_le_bytes(body[o..o + 8].try_into().unwrap());
        let version = u32::from_le_bytes(body[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let cache = IntegralCache::new(evaluator, quad)?;
        let stored = u64_at(8);
        if stored != cache.fingerprint {
            return Err(bad(&format!(
                "fingerprint mismatch (file {stored:016x}, config {:016x})",
                cache.fingerprint
            )));
        }
        let count = u64_at(16) as usize;
        if body.len() != HEADER + 16 * count || count == 0 {
            return Err(bad("size does not match checkpoint count"));
        }
        let mut grid = Vec::with_capacity(count);
        for i in 0..count {
            let o = HEADER + 16 * i;
            grid.push((f64::from_bits(u64_at(o)), f64::from_bits(u64_at(o + 8))));
        }
        if grid[0] != (0.0, 0.0) {
            return Err(bad("grid does not start at (0, 0)"));
        }
        for w in grid.windows(2) {
            if w[1].0 != next_checkpoint(w[0].0) || !(w[1].1 >= w[0].1) {
                return Err(bad(&format!("checkpoint after t = {} is inconsistent", w[0].0)));
            }
        }
        *cache.grid.write().unwrap() = grid;
        Ok(cache)
    }

    /// Writes the grid atomically (temporary file, then rename).
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&self.to_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(evaluator: CriticalLineEvaluator, quad: QuadratureConfig, path: &Path) -> Result<Self> {
        let bytes = fs::read(path)?;
        Self::from_bytes(evaluator, quad, &bytes)
    }

    /// Loads `path` if it exists, otherwise starts an empty grid.
    pub fn open(evaluator: CriticalLineEvaluator, quad: QuadratureConfig, path: &Path) -> Result<Self> {
        if path.exists() {
            Self::load(evaluator, quad, path)
        } else {
            Self::new(evaluator, quad)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cache() -> IntegralCache {
        let ev = CriticalLineEvaluator::new(EvaluatorConfig::default()).unwrap();
        IntegralCache::new(ev, QuadratureConfig::default()).unwrap()
    }

    #[test]
    fn starts_at_zero_and_is_monotone() {
        let c = cache();
        assert_eq!(c.hl_integral(0.0).unwrap(), 0.0);
        let mut prev = 0.0;
        for t in [0.5, 2.0, 13.7, 14.2, 100.0, 250.0] {
            let j = c.hl_integral(t).unwrap();
            assert!(j > prev, "J({t}) = {j}");
            prev = j;
        }
    }

    #[test]
    fn small_heights_match_reference() {
        // 20-digit |ζ|² on 0.125-wide Gauss–Legendre panels
        let c = cache();
        let j = c.hl_integral(50.0).unwrap();
        let want = 115.911_735_339_598_98;
        assert!(((j - want) / want).abs() < 1e-10, "{j} vs {want}");
    }

    #[test]
    fn query_order_does_not_change_values() {
        let a = cache();
        let b = cache();
        let x = a.hl_integral(321.5).unwrap();
        b.hl_integral(40.0).unwrap();
        b.hl_integral(300.0).unwrap();
        assert_eq!(b.hl_integral(321.5).unwrap(), x);
        assert_eq!(a.to_bytes(), b.to_bytes());
    }

    #[test]
    fn byte_round_trip_and_integrity() {
        let c = cache();
        c.extend_to(500.0).unwrap();
        let bytes = c.to_bytes();
        let ev = CriticalLineEvaluator::new(EvaluatorConfig::default()).unwrap();
        let back = IntegralCache::from_bytes(ev.clone(), QuadratureConfig::default(), &bytes).unwrap();
        assert_eq!(back.checkpoints(), c.checkpoints());

        let mut bad = bytes.clone();
        bad[HEADER + 20] ^= 1;
        let err = IntegralCache::from_bytes(ev.clone(), QuadratureConfig::default(), &bad).unwrap_err();
        assert!(err.to_string().contains("checksum mismatch"), "{err}");

        let other = QuadratureConfig { rel_tol: 1e-7, ..Default::default() };
        let err = IntegralCache::from_bytes(ev, other, &bytes).unwrap_err();
        assert!(err.to_string().contains("fingerprint mismatch"), "{err}");
    }

    #[test]
    fn checkpoints_rederive_and_range_is_enforced() {
        let c = cache();
        c.extend_to(260.0).unwrap();
        for i in [1, 2, 150, 200, c.len() - 1] {
            assert!(c.rederive(i).unwrap() <= 1e-6);
        }
        assert!(matches!(c.hl_integral(-1.0), Err(LabError::InvalidArgument(_))));
        assert!(matches!(c.hl_integral(2e7), Err(LabError::Capacity { .. })));
    }
}
