//! Independent test-side oracles. Nothing here calls into the library's
//! special-function code.

#![allow(dead_code)]

use abdirac::Complex64;

/// Gamma(x) for x > 0: shift up to x + 20, Stirling series there, divide back.
pub fn gamma_stirling(x: f64) -> f64 {
    assert!(x > 0.0);
    let shift = 20usize;
    let mut prod = 1.0;
    let mut y = x;
    for _ in 0..shift {
        prod *= y;
        y += 1.0;
    }
    // ln Gamma(y) ~ (y - 1/2) ln y - y + ln(2 pi)/2 + sum B_2n / (2n(2n-1) y^{2n-1})
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0)))));
    let ln_g = (y - 0.5) * y.ln() - y + 0.5 * (2.0 * std::f64::consts::PI).ln() + series;
    ln_g.exp() / prod
}

/// 1/Gamma(x) for any real x, via reflection for x <= 0.
pub fn rgamma_oracle(x: f64) -> f64 {
    if x > 0.0 {
        return 1.0 / gamma_stirling(x);
    }
    if x == x.trunc() {
        return 0.0;
    }
    // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    gamma_stirling(1.0 - x) * (std::f64::consts::PI * x).sin() / std::f64::consts::PI
}

/// Truncated ascending series for J_nu(z).
pub fn j_series(nu: f64, z: Complex64, terms: usize) -> Complex64 {
    let half = z * 0.5;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    let mut kfact = 1.0;
    for k in 0..terms {
        if k > 0 {
            pow *= -half * half;
            kfact *= k as f64;
        }
        sum += pow * (rgamma_oracle(k as f64 + nu + 1.0) / kfact);
    }
    sum * half.powf(nu)
}

/// d/dz of the truncated series: (J_{nu-1} - J_{nu+1}) / 2.
pub fn j_series_prime(nu: f64, z: Complex64, terms: usize) -> Complex64 {
    (j_series(nu - 1.0, z, terms) - j_series(nu + 1.0, z, terms)) * 0.5
}

/// Truncated ascending series for I_nu(x), x > 0.
pub fn i_series(nu: f64, x: f64, terms: usize) -> f64 {
    let q = 0.25 * x * x;
    let mut sum = 0.0;
    let mut pow = 1.0;
    let mut kfact = 1.0;
    for k in 0..terms {
        if k > 0 {
            pow *= q;
            kfact *= k as f64;
        }
        sum += pow * rgamma_oracle(k as f64 + nu + 1.0) / kfact;
    }
    sum * (0.5 * x).powf(nu)
}

pub fn i_series_prime(nu: f64, x: f64, terms: usize) -> f64 {
    0.5 * (i_series(nu - 1.0, x, terms) + i_series(nu + 1.0, x, terms))
}

/// Central difference of a complex function of one real variable.
pub fn central_diff(f: impl Fn(f64) -> Complex64, x: f64, h: f64) -> Complex64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Fourth-order central difference.
pub fn central_diff4(f: impl Fn(f64) -> Complex64, x: f64, h: f64) -> Complex64 {
    (f(x - 2.0 * h) - f(x + 2.0 * h) + (f(x + h) - f(x - h)) * 8.0) / (12.0 * h)
}

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}
