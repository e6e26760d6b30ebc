//! Jacob's ladder `φ₁`, its forward iterates and its reverse iterates
//! `[T]ᵏ = φ₁⁻ᵏ(T)`.
//!
//! `φ₁(T)` is the `Y > 1` solving `Y ln Y + (c − ln 2π) Y = J(T)`.

use std::sync::Arc;

use crate::constants::{CONSTANTS, LN_TWO_PI};
use crate::error::{LabError, Result};
use crate::quadrature::IntegralCache;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderSolverConfig {
    /// Relative residual accepted by the root finders.
    pub newton_tol: f64,
    pub max_iter: usize,
    /// Smallest height the ladder is evaluated at.
    pub t_min: f64,
}

impl Default for LadderSolverConfig {
    fn default() -> Self {
        LadderSolverConfig { newton_tol: 1e-12, max_iter: 64, t_min: 100.0 }
    }
}

impl LadderSolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.newton_tol > 0.0) {
            return Err(LabError::invalid(format!("newton_tol must be > 0, got {}", self.newton_tol)));
        }
        if self.max_iter == 0 {
            return Err(LabError::invalid("max_iter must be positive"));
        }
        if !(self.t_min >= 10.0) {
            return Err(LabError::invalid(format!("t_min must be >= 10, got {}", self.t_min)));
        }
        Ok(())
    }
}

/// A base height with its reverse iterates.
#[derive(Debug, Clone, PartialEq)]
pub struct ReverseChain {
    pub base: f64,
    /// `[T]¹ … [T]ᵏ`.
    pub iterates: Vec<f64>,
    /// `[T]ʳ − [T]ʳ⁻¹`, with `[T]⁰ = T`.
    pub gaps: Vec<f64>,
    /// `∫_{[T]ʳ⁻¹}^{[T]ʳ} |ζ(½+it)|² dt`.
    pub hl_increments: Vec<f64>,
}

impl ReverseChain {
    /// `[T]ʳ`, with `r = 0` giving the base.
    pub fn at(&self, r: usize) -> f64 {
        if r == 0 {
            self.base
        } else {
            self.iterates[r - 1]
        }
    }
}

/// `g(Y) = Y ln Y + (c − ln 2π) Y`, the right-hand side of the ladder equation.
pub fn ladder_g(y: f64) -> f64 {
    y * (y.ln() + CONSTANTS.c - LN_TWO_PI)
}

fn ladder_g_prime(y: f64) -> f64 {
    y.ln() + 1.0 + CONSTANTS.c - LN_TWO_PI
}

// g vanishes here and increases beyond it.
const G_ROOT: f64 = 3.527_753_977_724_091_4;

/// Solves `g(Y) = j` for `Y >= G_ROOT` by Newton's method, bisecting
/// whenever a step leaves the bracket.
pub fn invert_g(j: f64, cfg: &LadderSolverConfig) -> Result<f64> {
    if !(j > 0.0) || !j.is_finite() {
        return Err(LabError::invalid(format!("ladder equation needs J > 0, got {j}")));
    }
    let mut lo = G_ROOT;
    let mut hi = (2.0 * j).max(2.0 * G_ROOT);
    while ladder_g(hi) < j {
        hi *= 2.0;
    }
    let mut y = (j / j.ln().max(1.0)).clamp(lo, hi);
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.max_iter {
        let f = ladder_g(y) - j;
        residual = f.abs() / j;
        if residual <= cfg.newton_tol {
            return Ok(y);
        }
        if f < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let step = y - f / ladder_g_prime(y);
        y = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
    }
    Err(LabError::numeric(format!(
        "ladder equation did not converge for J = {j}: relative residual {residual:e}"
    )))
}

/// Jacob's ladder backed by a shared Hardy–Littlewood cache.
#[derive(Debug, Clone)]
pub struct Ladder {
    cache: Arc<IntegralCache>,
    config: LadderSolverConfig,
}

impl Ladder {
    pub fn new(cache: Arc<IntegralCache>, config: LadderSolverConfig) -> Result<Self> {
        config.validate()?;
        Ok(Ladder { cache, config })
    }

    pub fn cache(&self) -> &IntegralCache {
        &self.cache
    }

    pub fn config(&self) -> &LadderSolverConfig {
        &self.config
    }

    /// `φ₁(T)`.
    pub fn ladder_value(&self, t: f64) -> Result<f64> {
        if !(t >= self.config.t_min) || !t.is_finite() {
            return Err(LabError::invalid(format!(
                "ladder needs T >= {}, got {t}",
                self.config.t_min
            )));
        }
        invert_g(self.cache.hl_integral(t)?, &self.config)
    }

    /// `φ₁ʳ(t)`, applying the ladder `r` times.
    pub fn forward_iterate(&self, t: f64, r: usize) -> Result<f64> {
        let mut x = t;
        for _ in 0..r {
            if !(x >= self.config.t_min) {
                return Err(LabError::Capacity {
                    resource: "ladder height",
                    required: self.config.t_min,
                    available: x,
                });
            }
            x = self.ladder_value(x)?;
        }
        Ok(x)
    }

    /// `[prev]¹`: the `X > prev` with `φ₁(X) = prev`, i.e. `J(X) = g(prev)`.
    pub fn reverse_step(&self, prev: f64) -> Result<f64> {
        if !(prev >= self.config.t_min) || !prev.is_finite() {
            return Err(LabError::invalid(format!(
                "reverse iteration needs T >= {}, got {prev}",
                self.config.t_min
            )));
        }
        let target = ladder_g(prev);
        let max = self.cache.evaluator().max_height();
        let h = |x: f64| -> Result<f64> { Ok(self.cache.hl_integral(x)? - target) };

        let lo = prev;
        let f_lo = h(lo)?;
        if f_lo >= 0.0 {
            return Err(LabError::numeric(format!("J({prev}) already exceeds g({prev})")));
        }
        let mut width = prev * 2.0 * CONSTANTS.one_minus_c / prev.ln();
        let (mut hi, mut f_hi);
        loop {
            hi = prev + width;
            if hi > max {
                return Err(LabError::Capacity { resource: "zeta range", required: hi, available: max });
            }
            f_hi = h(hi)?;
            if f_hi >= 0.0 {
                break;
            }
            width *= 2.0;
        }
        brent(h, lo, hi, f_lo, f_hi, self.config.newton_tol * target.abs(), self.config.max_iter)
    }

    /// The chain `[T]¹ … [T]ᵏ` with gaps and Hardy–Littlewood increments.
    pub fn reverse_iterate(&self, t: f64, k: usize) -> Result<ReverseChain> {
        if k == 0 {
            return Err(LabError::invalid("reverse iteration needs k >= 1"));
        }
        let mut iterates = Vec::with_capacity(k);
        let mut gaps = Vec::with_capacity(k);
        let mut hl_increments = Vec::with_capacity(k);
        let mut prev = t;
        for _ in 0..k {
            let next = self.reverse_step(prev)?;
            iterates.push(next);
            gaps.push(next - prev);
            hl_increments.push(self.cache.integrate_zeta_sq(prev, next)?);
            prev = next;
        }
        Ok(ReverseChain { base: t, iterates, gaps, hl_increments })
    }

    /// `[T]ᵏ` alone.
    pub fn reverse(&self, t: f64, k: usize) -> Result<f64> {
        let mut x = t;
        for _ in 0..k {
            x = self.reverse_step(x)?;
        }
        Ok(x)
    }

    /// `∫_{[T]ᵏ}^{[T+L]ᵏ} ∏_{r=0}^{k−1} |ζ(½ + iφ₁ʳ(t))|² dt`.
    pub fn iterated_product_integral(&self, t: f64, k: usize, l: f64) -> Result<f64> {
        if k == 0 {
            return Err(LabError::invalid("iterated product integral needs k >= 1"));
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(LabError::invalid(format!("iterated product integral needs L > 0, got {l}")));
        }
        let a = self.reverse(t, k)?;
        let b = self.reverse(t + l, k)?;
        if k == 1 {
            return self.cache.integrate_zeta_sq(a, b);
        }
        let ev = self.cache.evaluator();
        let integrator = crate::quadrature::Integrator::new(*self.cache.quadrature())?;
        integrator.integrate(
            |x| {
                let mut y = x;
                let mut prod = ev.modulus_sq(y)?;
                for _ in 1..k {
                    y = self.ladder_value(y)?;
                    prod *= ev.modulus_sq(y)?;
                }
                Ok(prod)
            },
            a,
            b,
        )
    }
}

/// Brent's method on a sign-changing bracket, stopping when `|f| <= ftol`
/// or the bracket reaches floating-point resolution.
fn brent<F>(f: F, a: f64, b: f64, fa: f64, fb: f64, ftol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..max_iter.max(200) {
        if fb.abs() <= ftol || fb == 0.0 {
            return Ok(b);
        }
        if (b - a).abs() <= 4.0 * f64::EPSILON * b.abs() {
            // J is only piecewise smooth at the ulp scale; take the closer end.
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let outside = !((s > lo.min(b)) && (s < lo.max(b)));
        let slow = if bisected { (s - b).abs() >= (b - c).abs() / 2.0 } else { (s - b).abs() >= (c - d).abs() / 2.0 };
        if outside || slow {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s)?;
        d = c;
        c = b;
        fc = fb;
        if (fa < 0.0) == (fs < 0.0) {
            a = s;
            fa = fs;
        } else {
            b = s;
            fb = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(LabError::numeric(format!("bracketed solve stalled near {b}: residual {fb:e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_root_is_where_g_vanishes() {
        assert!(ladder_g(G_ROOT).abs() < 1e-14);
        assert!((G_ROOT - 2.0 * std::f64::consts::PI * (-CONSTANTS.c).exp()).abs() < 1e-14);
    }

    #[test]
    fn invert_g_meets_tolerance() {
        let cfg = LadderSolverConfig::default();
        for j in [1.0, 292.0, 1e4, 1.3e6, 1.7e8] {
            let y = invert_g(j, &cfg).unwrap();
            assert!((ladder_g(y) - j).abs() / j <= 1e-12, "j={j}");
        }
        assert!(invert_g(0.0, &cfg).is_err());
    }

    #[test]
    fn brent_finds_cubic_root() {
        let f = |x: f64| Ok(x * x * x - 2.0);
        let r = brent(f, 0.0, 2.0, -2.0, 6.0, 1e-15, 64).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn config_validation() {
        assert!(LadderSolverConfig { newton_tol: 0.0, ..Default::default() }.validate().is_err());
        assert!(LadderSolverConfig { t_min: 1.0, ..Default::default() }.validate().is_err());
    }
}
