//! Logarithmic and exponential integrals on the positive axis.

use crate::constants::EULER_GAMMA;
use crate::error::{LabError, Result};

/// Exponential integral `Ei(x)` for `x > 0`.
///
/// The power series `γ + ln x + Σ x^k/(k·k!)` has only positive terms on this
/// half-line, so it is summed directly up to `x = 40`; beyond that the
/// divergent asymptotic series is cut at its smallest term.
pub fn exponential_integral(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= 40.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        let mut k = 1.0;
        loop {
            term *= x / k;
            let add = term / k;
            sum += add;
            if add < sum * 1e-17 {
                break;
            }
            k += 1.0;
        }
        EULER_GAMMA + x.ln() + sum
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            let next = term * k / x;
            if next >= term || next < 1e-17 {
                break;
            }
            sum += next;
            term = next;
            k += 1.0;
        }
        x.exp() / x * sum
    }
}

/// `li(t) = Ei(ln t)`, the principal-value logarithmic integral from 0.
pub fn logarithmic_integral(t: f64) -> Result<f64> {
    if !(t >= 2.0) || !t.is_finite() {
        return Err(LabError::invalid(format!("li(t) requires t >= 2, got {t}")));
    }
    Ok(exponential_integral(t.ln()))
}

/// `li(t²)` evaluated as `Ei(2 ln t)`, so `t²` is never formed.
pub(crate) fn li_of_square(t: f64) -> f64 {
    exponential_integral(2.0 * t.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from a 30-digit evaluation of li.
    #[test]
    fn matches_high_precision_references() {
        let cases = [
            (2.0, 1.045_163_780_117_492_8),
            (10.0, 6.165_599_504_787_298),
            (100.0, 30.126_141_584_079_63),
            (1.0e4, 1_246.137_215_899_388_5),
        ];
        for (t, want) in cases {
            let got = logarithmic_integral(t).unwrap();
            assert!((got - want).abs() <= 1e-10 * want.max(1.0), "li({t}) = {got}, want {want}");
        }
    }

    #[test]
    fn derivative_is_reciprocal_log() {
        let e = std::f64::consts::E;
        let h = 1e-5;
        let slope =
            (logarithmic_integral(e + h).unwrap() - logarithmic_integral(e - h).unwrap()) / (2.0 * h);
        assert!((slope - 1.0).abs() < 1e-8, "slope {slope}");
    }

    #[test]
    fn series_and_asymptotic_branches_meet() {
        let below = exponential_integral(40.0);
        let above = exponential_integral(40.000_000_001);
        assert!(((above - below) / below).abs() < 1e-9);
    }

    #[test]
    fn rejects_small_arguments() {
        assert!(logarithmic_integral(1.5).is_err());
        assert!(logarithmic_integral(f64::NAN).is_err());
    }
}
