"""Generate Taylor coefficients of the Riemann-Siegel correction terms C0..C4.

The coefficients are expansions in u = p - 1/2, where p is the fractional
part of sqrt(t / 2pi).  Output is Rust source for crates/core/src/zeta/rs_coeffs.rs.

Requires mpmath.
"""
from mpmath import mp, mpf, pi, cos, factorial

mp.dps = 250
DEG = 90


def cos_series(coef_u2, const, deg):
    # cos(2*pi*(coef_u2*u^2 + const)) as a power series in u
    a = 2 * pi * const
    b = 2 * pi * coef_u2
    out = [mpf(0)] * (deg + 1)
    # cos(a + b u^2) = cos a cos(b u^2) - sin a sin(b u^2)
    from mpmath import sin
    ca, sa = cos(a), sin(a)
    k = 0
    while 2 * k <= deg:
        # cos(b u^2) term k: (-1)^m b^(2m) u^(4m)/(2m)! ; sin: (-1)^m b^(2m+1) u^(4m+2)/(2m+1)!
        if 4 * k <= deg:
            out[4 * k] += ca * (-1) ** k * b ** (2 * k) / factorial(2 * k)
        if 4 * k + 2 <= deg:
            out[4 * k + 2] -= sa * (-1) ** k * b ** (2 * k + 1) / factorial(2 * k + 1)
        k += 1
    return out


def cos_lin_series(deg):
    # -cos(2 pi u)
    out = [mpf(0)] * (deg + 1)
    for k in range(0, deg // 2 + 1):
        out[2 * k] = -((-1) ** k) * (2 * pi) ** (2 * k) / factorial(2 * k)
    return out


def divide(num, den):
    q = [mpf(0)] * len(num)
    for i in range(len(num)):
        s = num[i]
        for j in range(1, i + 1):
            s -= den[j] * q[i - j]
        q[i] = s / den[0]
    return q


num = cos_series(1, mpf(-5) / 16, DEG)
den = cos_lin_series(DEG)
psi = divide(num, den)


def deriv(series, m):
    return [series[i + m] * factorial(i + m) / factorial(i) for i in range(len(series) - m)]


def combo(terms, deg):
    out = [mpf(0)] * (deg + 1)
    for (m, w) in terms:
        d = deriv(psi, m)
        for i in range(deg + 1):
            out[i] += w * d[i]
    return out


D = 60
c = [
    combo([(0, 1)], D),
    combo([(3, -1 / (96 * pi**2))], D),
    combo([(2, 1 / (64 * pi**2)), (6, 1 / (18432 * pi**4))], D),
    combo([(1, -1 / (64 * pi**2)), (5, -1 / (3840 * pi**4)), (9, -1 / (5308416 * pi**6))], D),
    combo([(0, 1 / (128 * pi**2)), (4, mpf(19) / (24576 * pi**4)),
           (8, mpf(11) / (5898240 * pi**6)), (12, 1 / (2038431744 * pi**8))], D),
]

if __name__ == "__main__":
    print("// Generated by scripts/rs_coefficients.py. Do not edit.")
    print("// Taylor coefficients in u = p - 1/2 of the Riemann-Siegel corrections.")
    print("#![allow(clippy::excessive_precision)]")
    print()
    for j, ser in enumerate(c):
        # keep terms whose contribution on |u| <= 1/2 exceeds 1e-20
        last = max(i for i in range(len(ser)) if abs(ser[i]) * mpf(0.5) ** i > mpf(10) ** -20)
        print(f"pub(crate) const C{j}: [f64; {last + 1}] = [")
        for i in range(last + 1):
            print(f"    {mp.nstr(ser[i], 20, min_fixed=-30, max_fixed=30)},")
        print("];")
        print()
