use rayon::prelude::*;

use super::gauss::GaussLegendre;
use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    /// Quadrature nodes per local zero spacing `2π / ln(t/2π)` of `Z`.
    pub nodes_per_oscillation: usize,
    /// Gauss–Legendre order of one panel.
    pub panel_order: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { rel_tol: 1e-6, nodes_per_oscillation: 12, panel_order: 16 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(LabError::invalid(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if self.nodes_per_oscillation < 8 {
            return Err(LabError::invalid(format!(
                "nodes_per_oscillation must be >= 8, got {}",
                self.nodes_per_oscillation
            )));
        }
        if !(4..=64).contains(&self.panel_order) {
            return Err(LabError::invalid(format!(
                "panel_order must be in 4..=64, got {}",
                self.panel_order
            )));
        }
        Ok(())
    }

    /// Width of a panel starting near `t`: `panel_order` nodes at
    /// `nodes_per_oscillation` nodes per local zero spacing.
    pub fn panel_width(&self, t: f64) -> f64 {
        let spacing = 2.0 * std::f64::consts::PI / (t.max(10.0) / (2.0 * std::f64::consts::PI)).ln();
        spacing * self.panel_order as f64 / self.nodes_per_oscillation as f64
    }
}

// Depth cap of the per-panel bisection.
const MAX_DEPTH: u32 = 12;

/// Composite Gauss–Legendre integration with oscillation-tracking panels.
///
/// Each panel is checked against a lower-order rule on the same panel and
/// bisected until the two agree to `rel_tol`. Panels are evaluated in
/// parallel but summed in a fixed order, so the result does not depend on
/// the number of threads.
#[derive(Debug, Clone)]
pub struct Integrator {
    config: QuadratureConfig,
    rule: GaussLegendre,
    check: GaussLegendre,
}

impl Integrator {
    pub fn new(config: QuadratureConfig) -> Result<Self> {
        config.validate()?;
        let check_order = (config.panel_order * 3 / 4).max(2);
        Ok(Integrator {
            config,
            rule: GaussLegendre::new(config.panel_order),
            check: GaussLegendre::new(check_order),
        })
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.config
    }

    /// The deterministic panel boundaries of `[a, b]`.
    pub fn panels(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut x = a;
        while x < b {
            let w0 = self.config.panel_width(x);
            let w = self.config.panel_width(x + w0);
            let mut next = x + w;
            // absorb a sliver at the end into the last panel
            if next >= b || b - next < 0.25 * w {
                next = b;
            }
            out.push((x, next));
            x = next;
        }
        out
    }

    /// `∫_a^b f`, evaluating panels in parallel.
    pub fn integrate<F>(&self, f: F, a: f64, b: f64) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        self.check_bounds(a, b)?;
        let parts: Vec<Result<f64>> =
            self.panels(a, b).par_iter().map(|&(x, y)| self.panel(&f, x, y, 0)).collect();
        let mut sum = 0.0;
        for p in parts {
            sum += p?;
        }
        Ok(sum)
    }

    /// `∫_a^b f` on the calling thread only.
    pub fn integrate_serial<F>(&self, f: F, a: f64, b: f64) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        self.check_bounds(a, b)?;
        let mut sum = 0.0;
        for (x, y) in self.panels(a, b) {
            sum += self.panel(&f, x, y, 0)?;
        }
        Ok(sum)
    }

    fn check_bounds(&self, a: f64, b: f64) -> Result<()> {
        if !(a <= b) || !a.is_finite() || !b.is_finite() {
            return Err(LabError::invalid(format!("integration bounds must satisfy A <= B, got [{a}, {b}]")));
        }
        Ok(())
    }

    fn apply<F>(&self, rule: &GaussLegendre, f: &F, a: f64, b: f64) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let mut sum = 0.0;
        for (x, w) in rule.scaled(a, b) {
            let v = f(x)?;
            if !v.is_finite() {
                return Err(LabError::numeric(format!("integrand is {v} at t = {x}")));
            }
            sum += w * v;
        }
        Ok(sum)
    }

    fn panel<F>(&self, f: &F, a: f64, b: f64, depth: u32) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let fine = self.apply(&self.rule, f, a, b)?;
        let coarse = self.apply(&self.check, f, a, b)?;
        if (fine - coarse).abs() <= self.config.rel_tol * fine.abs() || depth >= MAX_DEPTH {
            return Ok(fine);
        }
        let mid = 0.5 * (a + b);
        Ok(self.panel(f, a, mid, depth + 1)? + self.panel(f, mid, b, depth + 1)?)
    }
}

/// One-shot integration with a fresh [`Integrator`].
pub fn integrate<F>(f: F, a: f64, b: f64, config: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    Integrator::new(*config)?.integrate(f, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_sine() {
        let cfg = QuadratureConfig::default();
        assert!((integrate(|_| Ok(1.0), 0.0, 1.0, &cfg).unwrap() - 1.0).abs() < 1e-15);
        let s = integrate(|x: f64| Ok(x.sin()), 0.0, std::f64::consts::PI, &cfg).unwrap();
        assert!((s - 2.0).abs() < 1e-12, "{s}");
    }

    #[test]
    fn empty_interval_and_bad_bounds() {
        let cfg = QuadratureConfig::default();
        assert_eq!(integrate(|_| Ok(1.0), 3.0, 3.0, &cfg).unwrap(), 0.0);
        assert!(matches!(integrate(|_| Ok(1.0), 3.0, 2.0, &cfg), Err(LabError::InvalidArgument(_))));
    }

    #[test]
    fn non_finite_sample_is_located() {
        let cfg = QuadratureConfig::default();
        let err = integrate(|x: f64| Ok(if x > 5.0 { f64::NAN } else { 1.0 }), 0.0, 10.0, &cfg)
            .unwrap_err();
        assert!(matches!(err, LabError::Numeric(ref m) if m.contains("at t =")), "{err}");
    }

    #[test]
    fn oscillatory_integrand_over_many_panels() {
        // ∫ cos²(t ln t)-like oscillation against its closed form: ∫_0^L cos²(ωt) dt
        let cfg = QuadratureConfig::default();
        let omega = 3.0;
        let l = 500.0;
        let got = integrate(|t: f64| Ok((omega * t).cos().powi(2)), 0.0, l, &cfg).unwrap();
        let want = l / 2.0 + (2.0 * omega * l).sin() / (4.0 * omega);
        assert!(((got - want) / want).abs() < 1e-12);
    }

    #[test]
    fn panels_cover_the_interval_and_shrink_with_height() {
        let integ = Integrator::new(QuadratureConfig::default()).unwrap();
        let p = integ.panels(100.0, 1000.0);
        assert_eq!(p.first().unwrap().0, 100.0);
        assert_eq!(p.last().unwrap().1, 1000.0);
        assert!(p.windows(2).all(|w| w[0].1 == w[1].0));
        let cfg = QuadratureConfig::default();
        assert!(cfg.panel_width(1e6) < cfg.panel_width(1e3));
    }

    #[test]
    fn config_validation() {
        let bad = QuadratureConfig { nodes_per_oscillation: 4, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = QuadratureConfig { rel_tol: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
