//! Finite-height evaluation of the asymptotic identities as ratio reports.

mod fermat;
mod q2;
mod report;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use crate::constants::CONSTANTS;
use crate::error::{LabError, Result};
use crate::ladder::Ladder;
use crate::prime::{inverse_ingham, remainder_integral, PrimeStore};
use crate::puzzles;
use crate::quadrature::IntegralCache;

pub use fermat::{fermat_functional, FermatRational, TrendReport, TREND_BAND};
pub use q2::{Q2Mode, Q2Region};
pub use report::{write_csv, Params, RatioReport, CSV_HEADER};

/// The catalog of verifiable formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaId {
    E2_6,
    E2_10,
    E2_13,
    E3_5,
    E3_9,
    E3_10,
    E3_13,
    E3_16,
    E3_17,
    E4_3,
    E4_5,
    E4_11,
    E5_3,
    E5_5,
    E5_12,
    E6_14,
}

impl FormulaId {
    pub const ALL: [FormulaId; 16] = [
        FormulaId::E2_6,
        FormulaId::E2_10,
        FormulaId::E2_13,
        FormulaId::E3_5,
        FormulaId::E3_9,
        FormulaId::E3_10,
        FormulaId::E3_13,
        FormulaId::E3_16,
        FormulaId::E3_17,
        FormulaId::E4_3,
        FormulaId::E4_5,
        FormulaId::E4_11,
        FormulaId::E5_3,
        FormulaId::E5_5,
        FormulaId::E5_12,
        FormulaId::E6_14,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FormulaId::E2_6 => "E2.6",
            FormulaId::E2_10 => "E2.10",
            FormulaId::E2_13 => "E2.13",
            FormulaId::E3_5 => "E3.5",
            FormulaId::E3_9 => "E3.9",
            FormulaId::E3_10 => "E3.10",
            FormulaId::E3_13 => "E3.13",
            FormulaId::E3_16 => "E3.16",
            FormulaId::E3_17 => "E3.17",
            FormulaId::E4_3 => "E4.3",
            FormulaId::E4_5 => "E4.5",
            FormulaId::E4_11 => "E4.11",
            FormulaId::E5_3 => "E5.3",
            FormulaId::E5_5 => "E5.5",
            FormulaId::E5_12 => "E5.12",
            FormulaId::E6_14 => "E6.14",
        }
    }

    /// Name of the height parameter swept by a grid.
    pub fn height_param(self) -> &'static str {
        match self {
            FormulaId::E3_16 | FormulaId::E3_17 | FormulaId::E4_3 | FormulaId::E4_5 => "tau",
            FormulaId::E4_11 => "rho",
            _ => "T",
        }
    }

    /// Left and right sides, in words.
    pub fn recipe(self) -> (&'static str, &'static str) {
        match self {
            FormulaId::E2_6 => ("∫_{[T]^{r-1}}^{[T]^r} |ζ|²", "(1-c)[T]^{r-1}"),
            FormulaId::E2_10 => ("[T]^{r+1} - [T]^r", "[T]^r - [T]^{r-1}"),
            FormulaId::E2_13 => ("∫_{[T]^r}^{[T]^{r+1}} |ζ|²", "∫_{[T]^{r-1}}^{[T]^r} |ζ|²"),
            FormulaId::E3_5 => ("∫_{N1([T]^{r-1})}^{N1([T]^r)} -P", "a(1-c)T/ln T"),
            FormulaId::E3_9 => ("∫_{N1([T]^r)}^{N1([T]^{r+1})} -P", "∫_{N1([T]^{r-1})}^{N1([T]^r)} -P"),
            FormulaId::E3_10 => ("∫_{N1(T)}^{N1([T]^1)} -P", "a(1-c)T/ln T"),
            FormulaId::E3_13 => ("∫_{N1(T)}^{N1([T]^1)} -P × ∫_{[T]^1}^{[T+2l]^1} |ζ|²", "2la(1-c)T"),
            FormulaId::E3_16 => ("F(x, tau)", "x"),
            FormulaId::E3_17 => ("F(q, tau)", "q = (x^n + y^n)/z^n"),
            FormulaId::E4_3 => ("∫_{N1(s)}^{N1([s]^1)} -P, s = tau/(a(1-c))", "tau/ln tau"),
            FormulaId::E4_5 => ("∫_{N1(s)}^{N1([s]^1)} -P, s = tau/(a(1-c))", "π(tau)"),
            FormulaId::E4_11 => ("G(x, rho)", "x"),
            FormulaId::E5_3 => ("∫_T^{[T]^1} |ζ|²", "∫_{N1(T)}^{N1([T]^1)} -P × ∫_{[T]^1}^{[T+1/a]^1} |ζ|²"),
            FormulaId::E5_5 => ("∬_{Q2(T)} -P(u)|ζ(½+iv)|²", "(1-c)T"),
            FormulaId::E5_12 => (
                "∫_2^{N2^k(T ln^k T)} -P",
                "∫_T^{[T]^1} |ζ|² × ∫_{[T]^k}^{[T+a/(1-c)]^k} ∏|ζ(½+iφ^r)|²",
            ),
            FormulaId::E6_14 => ("∫_2^{N3^k(ln^k T)} -P", "∏_r ∫_{[T]^1}^{[T+2l_r]^1} |ζ|²"),
        }
    }

    pub fn valid_ids() -> String {
        FormulaId::ALL.iter().map(|f| f.as_str()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormulaId {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        FormulaId::ALL
            .iter()
            .copied()
            .find(|f| f.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                LabError::invalid(format!("unknown formula '{s}'; valid IDs: {}", FormulaId::valid_ids()))
            })
    }
}

/// Everything a recipe needs: the prime store and a ladder with its cache.
#[derive(Debug, Clone)]
pub struct Lab {
    store: Arc<PrimeStore>,
    ladder: Ladder,
}

impl Lab {
    pub fn new(store: Arc<PrimeStore>, ladder: Ladder) -> Self {
        Lab { store, ladder }
    }

    pub fn store(&self) -> &PrimeStore {
        &self.store
    }

    pub fn ladder(&self) -> &Ladder {
        &self.ladder
    }

    pub fn cache(&self) -> &IntegralCache {
        self.ladder.cache()
    }

    /// `N₁(G)`.
    pub fn n1(&self, g: f64) -> Result<f64> {
        inverse_ingham(&self.store, g)
    }

    /// `∫_{N₁(g0)}^{N₁(g1)} {−P(t)} dt`.
    pub fn remainder_increment(&self, g0: f64, g1: f64) -> Result<f64> {
        remainder_integral(&self.store, self.n1(g0)?, self.n1(g1)?)
    }

    /// `∫_a^b |ζ(½+it)|² dt`.
    pub fn zeta_integral(&self, a: f64, b: f64) -> Result<f64> {
        self.cache().integrate_zeta_sq(a, b)
    }

    /// `∫_{[T]¹}^{[T+2l]¹} |ζ(½+it)|² dt`.
    pub fn shifted_integral(&self, t: f64, two_l: f64) -> Result<f64> {
        if !(two_l > 0.0) {
            return Err(LabError::invalid(format!("interval length must be > 0, got {two_l}")));
        }
        let lo = self.ladder.reverse(t, 1)?;
        let hi = self.ladder.reverse(t + two_l, 1)?;
        self.zeta_integral(lo, hi)
    }

    /// `∫_{N₁(s)}^{N₁([s]¹)} {−P}` with `s = xρ/(a(1−c))`.
    fn transformed_increment(&self, s: f64) -> Result<f64> {
        let s1 = self.ladder.reverse(s, 1)?;
        self.remainder_increment(s, s1)
    }

    /// The bracket of `F(x, τ)` without the `1/τ`, at `T = xτ`.
    fn f_bracket(&self, t: f64) -> Result<f64> {
        let t1 = self.ladder.reverse(t, 1)?;
        let rem = self.remainder_increment(t, t1)?;
        let two_l = 2.0 * f_half_length();
        Ok(rem * self.shifted_integral(t, two_l)?)
    }
}

// l̄ = 1/(2a(1−c)).
fn f_half_length() -> f64 {
    1.0 / (2.0 * CONSTANTS.a * CONSTANTS.one_minus_c)
}

/// `F(x, τ) = (1/τ)·{∫_{N₁(xτ)}^{N₁([xτ]¹)} −P × ∫_{[xτ]¹}^{[xτ + 1/(a(1−c))]¹} |ζ|²}`.
pub fn functional_f(lab: &Lab, x: f64, tau: f64) -> Result<f64> {
    if !(x > 0.0) || !(tau > 0.0) {
        return Err(LabError::invalid(format!("F needs x > 0 and tau > 0, got x = {x}, tau = {tau}")));
    }
    Ok(lab.f_bracket(x * tau)? / tau)
}

/// `G(x, ρ) = (1/π(ρ))·∫_{N₁(xρ/(a(1−c)))}^{N₁([xρ/(a(1−c))]¹)} −P`.
pub fn functional_g(lab: &Lab, x: f64, rho: f64) -> Result<f64> {
    if !(x > 0.0) || !(rho >= 2.0) {
        return Err(LabError::invalid(format!("G needs x > 0 and rho >= 2, got x = {x}, rho = {rho}")));
    }
    let pi = lab.store().prime_count(rho)? as f64;
    let s = x * rho / (CONSTANTS.a * CONSTANTS.one_minus_c);
    Ok(lab.transformed_increment(s)? / pi)
}

fn whole(params: &Params, name: &str, default: usize) -> Result<usize> {
    let v = params.get_or(name, default as f64);
    if v < 1.0 || v.fract() != 0.0 || v > 64.0 {
        return Err(LabError::invalid(format!("parameter {name} must be an integer in 1..=64, got {v}")));
    }
    Ok(v as usize)
}

/// Evaluates one catalog entry at the given parameters.
///
/// Missing optional parameters take their defaults and are echoed in the
/// report, so every report is self-describing.
pub fn evaluate_formula(lab: &Lab, id: FormulaId, params: &Params) -> Result<RatioReport> {
    let start = Instant::now();
    let h = id.height_param();
    let height = params.require(h)?;
    let mut echo = Params::new();
    echo.set(h, height);
    let (a, one_c) = (CONSTANTS.a, CONSTANTS.one_minus_c);
    let t = height;

    let (lhs, rhs) = match id {
        FormulaId::E2_6 => {
            let r = whole(params, "r", 1)?;
            echo.set("r", r as f64);
            let chain = lab.ladder.reverse_iterate(t, r)?;
            (chain.hl_increments[r - 1], one_c * chain.at(r - 1))
        }
        FormulaId::E2_10 | FormulaId::E2_13 => {
            let r = whole(params, "r", 1)?;
            echo.set("r", r as f64);
            let chain = lab.ladder.reverse_iterate(t, r + 1)?;
            let seq = if id == FormulaId::E2_10 { &chain.gaps } else { &chain.hl_increments };
            (seq[r], seq[r - 1])
        }
        FormulaId::E3_5 | FormulaId::E3_10 => {
            let r = if id == FormulaId::E3_10 { 1 } else { whole(params, "r", 1)? };
            echo.set("r", r as f64);
            let chain = lab.ladder.reverse_iterate(t, r)?;
            let lhs = lab.remainder_increment(chain.at(r - 1), chain.at(r))?;
            (lhs, a * one_c * t / t.ln())
        }
        FormulaId::E3_9 => {
            let r = whole(params, "r", 1)?;
            echo.set("r", r as f64);
            let chain = lab.ladder.reverse_iterate(t, r + 1)?;
            let next = lab.remainder_increment(chain.at(r), chain.at(r + 1))?;
            let prev = lab.remainder_increment(chain.at(r - 1), chain.at(r))?;
            (next, prev)
        }
        FormulaId::E3_13 => {
            let l = params.get_or("l", f_half_length());
            if !(l > 0.0) {
                return Err(LabError::invalid(format!("parameter l must be > 0, got {l}")));
            }
            echo.set("l", l);
            let t1 = lab.ladder.reverse(t, 1)?;
            let lhs = lab.remainder_increment(t, t1)? * lab.shifted_integral(t, 2.0 * l)?;
            (lhs, 2.0 * l * a * one_c * t)
        }
        FormulaId::E3_16 => {
            let x = params.get_or("x", 1.0);
            echo.set("x", x);
            (functional_f(lab, x, t)?, x)
        }
        FormulaId::E3_17 => {
            let q = FermatRational::from_params(params)?;
            for (k, v) in q.params() {
                echo.set(k, v);
            }
            (functional_f(lab, q.value(), t)?, q.value())
        }
        FormulaId::E4_3 | FormulaId::E4_5 => {
            let lhs = lab.transformed_increment(t / (a * one_c))?;
            let rhs = if id == FormulaId::E4_3 { t / t.ln() } else { lab.store().prime_count(t)? as f64 };
            (lhs, rhs)
        }
        FormulaId::E4_11 => {
            let x = params.get_or("x", 1.0);
            echo.set("x", x);
            (functional_g(lab, x, t)?, x)
        }
        FormulaId::E5_3 => {
            let t1 = lab.ladder.reverse(t, 1)?;
            let lhs = lab.zeta_integral(t, t1)?;
            let rhs = lab.remainder_increment(t, t1)? * lab.shifted_integral(t, 1.0 / a)?;
            (lhs, rhs)
        }
        FormulaId::E5_5 => {
            let mode = Q2Mode::from_code(params.get_or("mode", 0.0))?;
            echo.set("mode", mode.code());
            (Q2Region::new(lab, t)?.integral(lab, mode)?, one_c * t)
        }
        FormulaId::E5_12 => {
            let k = whole(params, "k", 1)?;
            echo.set("k", k as f64);
            let g = t * t.ln().powi(k as i32);
            let lhs = remainder_integral(lab.store(), 2.0, lab.n1(g)?)?;
            let t1 = lab.ladder.reverse(t, 1)?;
            let iterated = lab.ladder.iterated_product_integral(t, k, a / one_c)?;
            (lhs, lab.zeta_integral(t, t1)? * iterated)
        }
        FormulaId::E6_14 => {
            let v = puzzles::PuzzleVector::from_params(params)?;
            let report = puzzles::evaluate_puzzle(lab, t, &v)?;
            return Ok(report.with_elapsed(start.elapsed()));
        }
    };
    RatioReport::new(id, echo, lhs, rhs, start.elapsed())
}
