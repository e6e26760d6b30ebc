//! The remainder `P(t) = π(t) − li(t)` and the Ingham integral
//! `I(Y) = ∫₂^Y P(t) dt` in closed form.

use super::li::{exponential_integral, li_of_square, logarithmic_integral};
use super::store::PrimeStore;
use crate::constants::CONSTANTS;
use crate::error::{LabError, Result};

/// One evaluation of the prime-counting remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderQuery {
    pub t: f64,
    pub value_pi: u64,
    pub value_li: f64,
    pub value_p: f64,
}

/// Bisection resolution of [`inverse_ingham`].
pub const INVERSE_RESOLUTION: f64 = 1e-6;

// Geometric step of the coarse bracketing grid.
const BRACKET_RATIO: f64 = 1.01;

fn check_height(store: &PrimeStore, what: &'static str, y: f64) -> Result<()> {
    if !(y >= 2.0) {
        return Err(LabError::invalid(format!("{what} must be >= 2, got {y}")));
    }
    if y > store.limit() as f64 {
        return Err(LabError::OutOfRange { what, value: y, min: 2.0, max: store.limit() as f64 });
    }
    Ok(())
}

pub fn remainder(store: &PrimeStore, t: f64) -> Result<RemainderQuery> {
    check_height(store, "t", t)?;
    let value_pi = store.prime_count(t)?;
    let value_li = logarithmic_integral(t)?;
    Ok(RemainderQuery { t, value_pi, value_li, value_p: value_pi as f64 - value_li })
}

/// `∫₂^Y P(t) dt` from `∫₂^Y π = Y·π(Y) − Σ_{p≤Y} p` and
/// `∫₂^Y li = [t·li(t) − li(t²)]₂^Y`.
pub fn ingham_integral(store: &PrimeStore, y: f64) -> Result<f64> {
    check_height(store, "Y", y)?;
    let n = y.floor() as u64;
    Ok(ingham_unchecked(store, y, n))
}

fn ingham_unchecked(store: &PrimeStore, y: f64, n: u64) -> f64 {
    let pi = store.count_upto(n) as f64;
    let sum = store.sum_upto(n) as f64;
    closed_form(y, pi, sum) - closed_form(2.0, 1.0, 2.0)
}

// Y·(π(Y) − li(Y)) + li(Y²) − Σp: the antiderivative of P without its value at 2.
fn closed_form(y: f64, pi: f64, sum: f64) -> f64 {
    let li_y = exponential_integral(y.ln());
    y * (pi - li_y) + (li_of_square(y) - sum)
}

/// `∫_A^B {−P(t)} dt = −(I(B) − I(A))`.
pub fn remainder_integral(store: &PrimeStore, a: f64, b: f64) -> Result<f64> {
    if a > b {
        return Err(LabError::invalid(format!("remainder integral needs A <= B, got [{a}, {b}]")));
    }
    if a == b {
        check_height(store, "A", a)?;
        return Ok(0.0);
    }
    Ok(ingham_integral(store, a)? - ingham_integral(store, b)?)
}

/// The first height `N >= 2` at which `I(N) <= −a·G`.
///
/// A geometric grid brackets the first crossing, then bisection narrows it to
/// [`INVERSE_RESOLUTION`]. `N₁(G)` is this function at `G`; `N₂ᵏ` and `N₃ᵏ`
/// are the same map at `T·lnᵏT` and `lnᵏT`.
pub fn inverse_ingham(store: &PrimeStore, g: f64) -> Result<f64> {
    if !(g > 0.0) || !g.is_finite() {
        return Err(LabError::invalid(format!("inverse Ingham argument must be > 0, got {g}")));
    }
    let target = -CONSTANTS.a * g;
    let limit = store.limit() as f64;
    let eval = |y: f64| ingham_unchecked(store, y, y.floor() as u64);

    let mut lo = 2.0;
    let mut hi;
    loop {
        hi = (lo * BRACKET_RATIO).min(limit);
        if eval(hi) <= target {
            break;
        }
        if hi >= limit {
            // −I grows roughly like Y^{3/2}; extrapolate the limit that would suffice.
            let reached = -eval(limit);
            let scale = if reached > 0.0 { (-target / reached).powf(2.0 / 3.0) } else { 2.0 };
            return Err(LabError::Capacity {
                resource: "sieve limit",
                required: (limit * scale * 1.05).ceil(),
                available: limit,
            });
        }
        lo = hi;
    }
    while hi - lo > INVERSE_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eval(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
