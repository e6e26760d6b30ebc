//! Numerical constants shared by every kernel.

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `ln(2π)`.
pub const LN_TWO_PI: f64 = 1.837_877_066_409_345_5;

/// Exponent of the Ingham scale constant `a = e^4.5`.
pub const A_EXPONENT: f64 = 4.5;

/// The constants the ladder and remainder formulas are written in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MathConstants {
    /// Euler–Mascheroni constant.
    pub c: f64,
    pub one_minus_c: f64,
    /// `e^4.5`.
    pub a: f64,
    pub ln_two_pi: f64,
}

impl MathConstants {
    pub const fn new() -> Self {
        MathConstants {
            c: EULER_GAMMA,
            one_minus_c: 1.0 - EULER_GAMMA,
            // exp(4.5), correctly rounded
            a: 90.017_131_300_521_81,
            ln_two_pi: LN_TWO_PI,
        }
    }
}

impl Default for MathConstants {
    fn default() -> Self {
        Self::new()
    }
}

pub const CONSTANTS: MathConstants = MathConstants::new();

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_constant_is_exp_four_and_a_half() {
        let k = MathConstants::new();
        assert_eq!(k.a, A_EXPONENT.exp());
        assert!((90.017..=90.018).contains(&k.a));
    }

    #[test]
    fn euler_gamma_bounds() {
        let k = MathConstants::new();
        assert!((0.577215..=0.577216).contains(&k.c));
        assert_eq!(k.one_minus_c, 1.0 - k.c);
        assert!((k.ln_two_pi - (2.0 * std::f64::consts::PI).ln()).abs() < 1e-15);
    }
}
