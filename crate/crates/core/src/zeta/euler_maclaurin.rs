//! Euler–Maclaurin summation for `ζ(½ + it)` and a complex log-gamma used for
//! the exact Riemann–Siegel phase at small heights.

use num_complex::Complex64;

/// `B_{2k}/(2k)!` for `k = 1..=15`.
const BERNOULLI_OVER_FACTORIAL: [f64; 15] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
    77_683.0 / 14_101_100_039_391_805_440_000.0,
    -236_364_091.0 / 1_693_824_136_731_743_669_452_800_000.0,
    657_931.0 / 186_134_520_519_971_831_808_000_000.0,
    -3_392_780_147.0 / 37_893_265_687_455_865_519_472_640_000_000.0,
    1_723_168_255_201.0 / 759_790_291_646_040_068_357_842_010_112_000_000.0,
];

pub const MAX_EM_TERMS: usize = BERNOULLI_OVER_FACTORIAL.len();

/// `ζ(½ + it)` by Euler–Maclaurin with `m` correction terms.
///
/// The cut `N` is chosen so that `|s + 2m| / (2πN) <= ½`, which keeps the
/// neglected tail near `4^{-m}` of the last retained term.
pub(crate) fn zeta_half_line(t: f64, m: usize) -> Complex64 {
    let m = m.clamp(1, MAX_EM_TERMS);
    let s = Complex64::new(0.5, t);
    let n_cut = (((t.abs() + 2.0 * m as f64) / std::f64::consts::PI).ceil() as usize).max(10);

    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..n_cut {
        let ln_n = (n as f64).ln();
        let mag = 1.0 / (n as f64).sqrt();
        let (sin, cos) = (t * ln_n).sin_cos();
        sum += Complex64::new(mag * cos, -mag * sin);
    }
    let big_n = n_cut as f64;
    let ln_big = big_n.ln();
    // N^{-s}
    let n_pow = Complex64::new(0.0, -t * ln_big).exp() / big_n.sqrt();
    sum += n_pow * big_n / (s - 1.0);
    sum += 0.5 * n_pow;

    // (s)_{2k-1} N^{-s-2k+1}
    let mut rising = s;
    let mut pow = n_pow / big_n;
    for (k, &coef) in BERNOULLI_OVER_FACTORIAL.iter().take(m).enumerate() {
        if k > 0 {
            let j = (2 * k - 1) as f64;
            rising = rising * (s + j) * (s + j + 1.0);
            pow /= big_n * big_n;
        }
        sum += coef * rising * pow;
    }
    sum
}

/// Principal branch of `ln Γ(z)` for `Re z > 0`.
pub(crate) fn ln_gamma(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 12.0 {
        shift += z.ln();
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    // B_{2k} / (2k(2k-1))
    const STIRLING: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += c * p;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * crate::constants::LN_TWO_PI + series - shift
}

/// `θ(t) = Im ln Γ(¼ + it/2) − (t/2) ln π`, valid for all `t`.
pub(crate) fn theta_exact(t: f64) -> f64 {
    ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * std::f64::consts::PI.ln()
}
