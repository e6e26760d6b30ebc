use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::{functional_f, FormulaId, Lab, Params, RatioReport};
use crate::error::{LabError, Result};

/// Relative band within which a finite-height trend is said to target a value.
pub const TREND_BAND: f64 = 0.3;

/// `(xⁿ + yⁿ)/zⁿ` for natural `x, y, z` and `n >= 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermatRational {
    pub x: u64,
    pub y: u64,
    pub z: u64,
    pub n: u32,
    num: BigUint,
    den: BigUint,
}

impl FermatRational {
    pub fn new(x: u64, y: u64, z: u64, n: u32) -> Result<Self> {
        if n < 3 {
            return Err(LabError::invalid(format!("Fermat rationals need n >= 3, got n = {n}")));
        }
        if x == 0 || y == 0 || z == 0 {
            return Err(LabError::invalid(format!(
                "x, y, z must be positive integers, got ({x}, {y}, {z})"
            )));
        }
        if n > 4096 {
            return Err(LabError::invalid(format!("exponent n = {n} exceeds 4096")));
        }
        let num = BigUint::from(x).pow(n) + BigUint::from(y).pow(n);
        let den = BigUint::from(z).pow(n);
        Ok(FermatRational { x, y, z, n, num, den })
    }

    pub(crate) fn from_params(p: &Params) -> Result<Self> {
        let int = |k: &str| -> Result<u64> {
            let v = p.require(k)?;
            if v < 0.0 || v.fract() != 0.0 || v > 9.007_199_254_740_992e15 {
                return Err(LabError::invalid(format!("{k} must be a natural number, got {v}")));
            }
            Ok(v as u64)
        };
        let n = int("n")?;
        FermatRational::new(int("x")?, int("y")?, int("z")?, u32::try_from(n).unwrap_or(u32::MAX))
    }

    pub(crate) fn params(&self) -> [(&'static str, f64); 4] {
        [("x", self.x as f64), ("y", self.y as f64), ("z", self.z as f64), ("n", self.n as f64)]
    }

    /// Whether `xⁿ + yⁿ = zⁿ`, decided in exact integer arithmetic.
    pub fn is_exactly_one(&self) -> bool {
        self.num == self.den
    }

    /// The reduced fraction `(p, q)`.
    pub fn reduced(&self) -> (BigUint, BigUint) {
        let g = self.num.gcd(&self.den);
        (&self.num / &g, &self.den / &g)
    }

    /// The value as a real, converted after scaling numerator and
    /// denominator together so both fit a double.
    pub fn value(&self) -> f64 {
        let bits = self.num.bits().max(self.den.bits());
        let shift = bits.saturating_sub(1000);
        let n = (&self.num >> shift).to_f64().unwrap_or(f64::INFINITY);
        let d = (&self.den >> shift).to_f64().unwrap_or(f64::INFINITY);
        n / d
    }
}

impl fmt::Display for FermatRational {
    /// `p/q` in lowest terms, or `p` when the denominator is one.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.reduced();
        if q.is_one() {
            write!(f, "{p}")
        } else {
            write!(f, "{p}/{q}")
        }
    }
}

/// `F(q, τ)` over a grid of `τ`, with the exact-equality verdict.
#[derive(Debug, Clone)]
pub struct TrendReport {
    pub q: FermatRational,
    pub rows: Vec<RatioReport>,
    /// `|F(q, τ) − 1|` per grid point.
    pub distance_from_one: Vec<f64>,
    /// The last `F` is within [`TREND_BAND`] of `q` in relative terms.
    pub targets_value: bool,
    pub exactly_one: bool,
}

impl TrendReport {
    /// `value=728/729, exact≠1`.
    pub fn verdict(&self) -> String {
        let rel = if self.exactly_one { "=" } else { "≠" };
        format!("value={}, exact{rel}1", self.q)
    }
}

pub fn fermat_functional(lab: &Lab, q: &FermatRational, tau_grid: &[f64]) -> Result<TrendReport> {
    if tau_grid.is_empty() {
        return Err(LabError::invalid("tau grid is empty"));
    }
    if tau_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(LabError::invalid("tau grid must be strictly increasing"));
    }
    let value = q.value();
    let mut rows = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let start = std::time::Instant::now();
        let f = functional_f(lab, value, tau)?;
        let mut params = Params::new().with("tau", tau);
        for (k, v) in q.params() {
            params.set(k, v);
        }
        rows.push(RatioReport::new(FormulaId::E3_17, params, f, value, start.elapsed())?);
    }
    let distance_from_one = rows.iter().map(|r| (r.lhs - 1.0).abs()).collect();
    let last = rows.last().unwrap();
    Ok(TrendReport {
        q: q.clone(),
        targets_value: last.deviation() <= TREND_BAND,
        distance_from_one,
        exactly_one: q.is_exactly_one(),
        rows,
    })
}
