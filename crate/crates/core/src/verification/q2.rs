use super::Lab;
use crate::constants::CONSTANTS;
use crate::error::{LabError, Result};
use crate::prime::{logarithmic_integral, remainder_integral};
use crate::quadrature::GaussLegendre;

// Rule applied to li between consecutive primes in grid2d mode.
const PIECE_ORDER: usize = 8;

/// How the double integral over `Q₂(T)` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Q2Mode {
    /// Product of the two one-dimensional integrals.
    Separable,
    /// Tensor-product quadrature over the rectangle.
    Grid2d,
}

impl Q2Mode {
    pub(crate) fn from_code(code: f64) -> Result<Self> {
        match code {
            0.0 => Ok(Q2Mode::Separable),
            1.0 => Ok(Q2Mode::Grid2d),
            _ => Err(LabError::invalid(format!("mode must be separable or grid2d, got {code}"))),
        }
    }

    pub(crate) fn code(self) -> f64 {
        match self {
            Q2Mode::Separable => 0.0,
            Q2Mode::Grid2d => 1.0,
        }
    }
}

/// The rectangle `(N₁(T), N₁([T]¹)) × ([T]¹, [T+1/a]¹)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Q2Region {
    pub t: f64,
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl Q2Region {
    pub fn new(lab: &Lab, t: f64) -> Result<Self> {
        let floor = lab.ladder().config().t_min;
        if !(t >= floor) {
            return Err(LabError::invalid(format!("Q2(T) needs T >= {floor}, got {t}")));
        }
        let t1 = lab.ladder().reverse(t, 1)?;
        let u = (lab.n1(t)?, lab.n1(t1)?);
        let v = (t1, lab.ladder().reverse(t + 1.0 / CONSTANTS.a, 1)?);
        if !(u.0 < u.1) || !(v.0 < v.1) {
            return Err(LabError::invalid(format!("Q2({t}) is degenerate: u = {u:?}, v = {v:?}")));
        }
        Ok(Q2Region { t, u, v })
    }

    /// `∬ {−P(u)} |ζ(½+iv)|² du dv`.
    pub fn integral(&self, lab: &Lab, mode: Q2Mode) -> Result<f64> {
        match mode {
            Q2Mode::Separable => {
                let du = remainder_integral(lab.store(), self.u.0, self.u.1)?;
                Ok(du * lab.zeta_integral(self.v.0, self.v.1)?)
            }
            Q2Mode::Grid2d => self.grid2d(lab),
        }
    }

    fn grid2d(&self, lab: &Lab) -> Result<f64> {
        let u_nodes = self.remainder_nodes(lab)?;
        let v_nodes = self.zeta_nodes(lab)?;
        let mut total = 0.0;
        for &(wu, fu) in &u_nodes {
            let mut row = 0.0;
            for &(wv, fv) in &v_nodes {
                row += wu * wv * fu * fv;
            }
            total += row;
        }
        Ok(total)
    }

    // (weight, −P(u)) pairs: −P = li(u) − π(u), with π constant between primes.
    fn remainder_nodes(&self, lab: &Lab) -> Result<Vec<(f64, f64)>> {
        let store = lab.store();
        let rule = GaussLegendre::new(PIECE_ORDER);
        let (a, b) = self.u;
        let mut breaks = vec![a];
        let first = a.floor() as u64 + 1;
        let last = b.ceil() as u64;
        breaks.extend((first..last).filter(|&n| store.is_prime(n) && (n as f64) < b).map(|n| n as f64));
        breaks.push(b);
        let mut out = Vec::with_capacity(breaks.len() * PIECE_ORDER);
        for w in breaks.windows(2) {
            let pi = store.prime_count(w[0])? as f64;
            for (x, wt) in rule.scaled(w[0], w[1]) {
                out.push((wt, logarithmic_integral(x)? - pi));
            }
        }
        Ok(out)
    }

    // (weight, |ζ|²) pairs on fixed panels.
    fn zeta_nodes(&self, lab: &Lab) -> Result<Vec<(f64, f64)>> {
        let cache = lab.cache();
        let cfg = cache.quadrature();
        let rule = GaussLegendre::new(cfg.panel_order);
        let (a, b) = self.v;
        let panels = ((b - a) / cfg.panel_width(a)).ceil().max(1.0) as usize;
        let h = (b - a) / panels as f64;
        let mut out = Vec::with_capacity(panels * cfg.panel_order);
        for i in 0..panels {
            let lo = a + h * i as f64;
            let hi = if i + 1 == panels { b } else { lo + h };
            for (x, wt) in rule.scaled(lo, hi) {
                out.push((wt, cache.evaluator().modulus_sq(x)?));
            }
        }
        Ok(out)
    }
}
