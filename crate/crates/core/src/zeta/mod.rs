//! Hardy's `Z(t)` and `|ζ(½ + it)|²` on the critical line.
//!
//! Above `switch_height` the Riemann–Siegel formula is used with up to five
//! correction terms `C₀…C₄`; below it `ζ(½ + it)` comes from Euler–Maclaurin
//! summation and is rotated by the phase `e^{iθ(t)}`.

mod euler_maclaurin;
mod rs_coeffs;

use std::f64::consts::PI;

use crate::constants::LN_TWO_PI;
use crate::error::{LabError, Result};

pub use euler_maclaurin::MAX_EM_TERMS;

/// Smallest height accepted by [`theta`].
pub const THETA_MIN: f64 = 10.0;
/// Smallest height accepted by [`CriticalLineEvaluator::hardy_z`].
pub const Z_MIN: f64 = 2.0;
pub const MAX_CORRECTION_TERMS: usize = 5;

/// Riemann–Siegel phase from its asymptotic series, for `t >= 10`.
pub fn theta(t: f64) -> Result<f64> {
    if !(t >= THETA_MIN) || !t.is_finite() {
        return Err(LabError::invalid(format!("theta requires t >= {THETA_MIN}, got {t}")));
    }
    Ok(theta_series(t))
}

#[inline]
fn theta_series(t: f64) -> f64 {
    let r = 1.0 / t;
    let r2 = r * r;
    0.5 * t * ((t.ln() - LN_TWO_PI) - 1.0) - PI / 8.0
        + r * (1.0 / 48.0 + r2 * (7.0 / 5760.0 + r2 * (31.0 / 80_640.0 + r2 * (127.0 / 430_080.0))))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluatorConfig {
    /// Riemann–Siegel is used at and above this height.
    pub switch_height: f64,
    /// Number of Riemann–Siegel corrections, `C₀` through `C_{n−1}`.
    pub rs_correction_terms: usize,
    /// Euler–Maclaurin truncation (Bernoulli terms).
    pub em_terms: usize,
    /// Largest height the evaluator is sized for.
    pub max_height: f64,
}

impl Default for EvaluatorConfig {
    fn default() -> Self {
        EvaluatorConfig {
            switch_height: 200.0,
            rs_correction_terms: MAX_CORRECTION_TERMS,
            em_terms: MAX_EM_TERMS,
            max_height: 1e7,
        }
    }
}

/// Critical-line evaluator with precomputed `ln n` and `n^{-1/2}` tables.
#[derive(Debug, Clone)]
pub struct CriticalLineEvaluator {
    config: EvaluatorConfig,
    ln_n: Vec<f64>,
    inv_sqrt_n: Vec<f64>,
}

impl CriticalLineEvaluator {
    pub fn new(config: EvaluatorConfig) -> Result<Self> {
        if !(2..=MAX_CORRECTION_TERMS).contains(&config.rs_correction_terms) {
            return Err(LabError::invalid(format!(
                "rs_correction_terms must be in 2..={MAX_CORRECTION_TERMS}, got {}",
                config.rs_correction_terms
            )));
        }
        if !(1..=MAX_EM_TERMS).contains(&config.em_terms) {
            return Err(LabError::invalid(format!(
                "em_terms must be in 1..={MAX_EM_TERMS}, got {}",
                config.em_terms
            )));
        }
        if !(config.switch_height >= 50.0) || !(config.max_height >= config.switch_height) {
            return Err(LabError::invalid(format!(
                "need 50 <= switch_height <= max_height, got {} and {}",
                config.switch_height, config.max_height
            )));
        }
        let n_max = (config.max_height / (2.0 * PI)).sqrt().floor() as usize + 1;
        let ln_n = (0..=n_max).map(|n| if n == 0 { 0.0 } else { (n as f64).ln() }).collect();
        let inv_sqrt_n =
            (0..=n_max).map(|n| if n == 0 { 0.0 } else { 1.0 / (n as f64).sqrt() }).collect();
        Ok(CriticalLineEvaluator { config, ln_n, inv_sqrt_n })
    }

    pub fn config(&self) -> &EvaluatorConfig {
        &self.config
    }

    pub fn max_height(&self) -> f64 {
        self.config.max_height
    }

    fn check_range(&self, t: f64, min: f64) -> Result<()> {
        if !(t >= min) || !t.is_finite() {
            return Err(LabError::invalid(format!("critical-line height must be >= {min}, got {t}")));
        }
        if t > self.config.max_height {
            return Err(LabError::Capacity {
                resource: "zeta range",
                required: t,
                available: self.config.max_height,
            });
        }
        Ok(())
    }

    /// Hardy's `Z(t)`, real for real `t >= 2`.
    pub fn hardy_z(&self, t: f64) -> Result<f64> {
        self.check_range(t, Z_MIN)?;
        Ok(if t >= self.config.switch_height { self.z_riemann_siegel(t) } else { self.z_small(t) })
    }

    /// `|ζ(½ + it)|² = Z(t)²`.
    pub fn zeta_sq(&self, t: f64) -> Result<f64> {
        let z = self.hardy_z(t)?;
        Ok(z * z)
    }

    /// `|ζ(½ + it)|²` for any `t >= 0`; the quadrature integrand.
    ///
    /// Below the switch height the modulus of the Euler–Maclaurin value is
    /// used directly, which also covers `[0, 2)`.
    pub fn modulus_sq(&self, t: f64) -> Result<f64> {
        self.check_range(t, 0.0)?;
        if t >= self.config.switch_height {
            let z = self.z_riemann_siegel(t);
            Ok(z * z)
        } else {
            Ok(euler_maclaurin::zeta_half_line(t, self.config.em_terms).norm_sqr())
        }
    }

    /// `Z(t)` by Euler–Maclaurin, for any `t >= 2` inside the evaluator range.
    pub fn hardy_z_euler_maclaurin(&self, t: f64) -> Result<f64> {
        self.check_range(t, Z_MIN)?;
        Ok(self.z_small(t))
    }

    /// `Z(t)` by Riemann–Siegel, for `t >= 50`.
    pub fn hardy_z_riemann_siegel(&self, t: f64) -> Result<f64> {
        self.check_range(t, 50.0)?;
        Ok(self.z_riemann_siegel(t))
    }

    fn z_small(&self, t: f64) -> f64 {
        let phase = if t >= THETA_MIN { theta_series(t) } else { euler_maclaurin::theta_exact(t) };
        let zeta = euler_maclaurin::zeta_half_line(t, self.config.em_terms);
        let (s, c) = phase.sin_cos();
        zeta.re * c - zeta.im * s
    }

    fn z_riemann_siegel(&self, t: f64) -> f64 {
        let a = (t / (2.0 * PI)).sqrt();
        let n = a.floor() as usize;
        let th = theta_series(t);

        let main = main_sum(th, t, &self.ln_n[1..=n], &self.inv_sqrt_n[1..=n]);

        let u = a - n as f64 - 0.5;
        let inv_a = 1.0 / a;
        let tables: [&[f64]; MAX_CORRECTION_TERMS] =
            [&rs_coeffs::C0, &rs_coeffs::C1, &rs_coeffs::C2, &rs_coeffs::C3, &rs_coeffs::C4];
        let mut correction = 0.0;
        let mut scale = 1.0;
        for coeffs in tables.iter().take(self.config.rs_correction_terms) {
            correction += scale * horner(coeffs, u);
            scale *= inv_a;
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        2.0 * main + sign * inv_a.sqrt() * correction
    }
}

// Four independent accumulators keep the loop free of a serial dependency;
// the summation order is fixed, so results are reproducible.
/// `Σ n^{-1/2} cos(θ − t ln n)` over the supplied tables.
fn main_sum(th: f64, t: f64, ln: &[f64], w: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    for (l4, w4) in ln.chunks_exact(4).zip(w.chunks_exact(4)) {
        for j in 0..4 {
            acc[j] += w4[j] * cos_reduced(th - t * l4[j]);
        }
    }
    let tail = ln.len() - ln.len() % 4;
    let mut sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (l, w) in ln[tail..].iter().zip(&w[tail..]) {
        sum += w * cos_reduced(th - t * l);
    }
    sum
}

// π/2 split so that k·PIO2_HI is exact for |k| < 2^20.
const PIO2_HI: f64 = 1.570_796_326_734_125_6;
const PIO2_LO: f64 = 6.077_100_506_506_192e-11;
const ROUND_SHIFT: f64 = 6_755_399_441_055_744.0;

/// `cos(x)` for the Riemann–Siegel phases, `|x| < 2^30`.
///
/// Cody–Waite reduction to `[−π/4, π/4]` and branch-free polynomial kernels.
/// The reduction error is of the order of `ulp(x)`, the same as the error
/// already carried by the phase `θ(t) − t ln n`.
#[inline(always)]
fn cos_reduced(x: f64) -> f64 {
    // Adding and removing 1.5·2^52 rounds to nearest without a libm call.
    let shifted = x * std::f64::consts::FRAC_2_PI + ROUND_SHIFT;
    let k = shifted - ROUND_SHIFT;
    let r = (x - k * PIO2_HI) - k * PIO2_LO;
    // the low mantissa bits of `shifted` hold k mod 4
    let q = shifted.to_bits() & 3;
    let r2 = r * r;
    let c = 1.0
        + r2 * (-1.0 / 2.0
            + r2 * (1.0 / 24.0
                + r2 * (-1.0 / 720.0
                    + r2 * (1.0 / 40_320.0
                        + r2 * (-1.0 / 3_628_800.0
                            + r2 * (1.0 / 479_001_600.0
                                + r2 * (-1.0 / 87_178_291_200.0
                                    + r2 * (1.0 / 20_922_789_888_000.0))))))));
    let s = r
        * (1.0
            + r2 * (-1.0 / 6.0
                + r2 * (1.0 / 120.0
                    + r2 * (-1.0 / 5040.0
                        + r2 * (1.0 / 362_880.0
                            + r2 * (-1.0 / 39_916_800.0
                                + r2 * (1.0 / 6_227_020_800.0
                                    + r2 * (-1.0 / 1_307_674_368_000.0))))))));
    // cos(r + qπ/2) = [cos r, −sin r, −cos r, sin r][q]
    let odd = (q & 1) as f64;
    let flip = (((q + 1) >> 1) & 1) as f64;
    (c + odd * (s - c)) * (1.0 - 2.0 * flip)
}

#[inline]
fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}
