//! J and Y for real order and general complex argument.
//!
//! Small |z| (relative to the order) uses the ascending series; large |z| uses
//! the Hankel expansion at a reduced order mu in [0, 2) followed by upward
//! recurrence, which is stable for the Hankel pair while the order stays
//! below |z|. Near the real axis the series cancels badly (its terms reach
//! e^{|z| - |Im z|} times the result), so there J and Y are continued off
//! the real axis by a Taylor series built on the real-argument routine.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::{cos_pi, ln_gamma_abs, rgamma, sin_pi};
use crate::error::{Error, Result};

const SERIES_TOL: f64 = 1e-17;
const MAX_TERMS: usize = 10_000;

/// Radius below which the ascending series is used for order `nu`.
pub(crate) fn series_radius(nu: f64) -> f64 {
    17.0_f64.max(1.2 * nu.abs())
}

/// Ascending series for J_nu(z); nu may be negative but not a negative integer.
pub(crate) fn j_series(nu: f64, z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Ok(if nu == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    let half = z * 0.5;
    let q = -half * half;
    let g = rgamma(nu + 1.0);
    // (z/2)^nu / Gamma(nu+1), kept in log form so large orders do not overflow early
    let log_pref = half.ln() * nu - ln_gamma_abs(nu + 1.0);
    let sign = if g < 0.0 { -1.0 } else { 1.0 };
    let pref = log_pref.exp() * sign;
    if !pref.re.is_finite() || !pref.im.is_finite() {
        return Err(Error::Overflow { nu, abs_z: z.norm() });
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term = term * q / (kf * (nu + kf));
        sum += term;
        if term.norm() <= SERIES_TOL * sum.norm() && kf > q.norm().sqrt() {
            return Ok(pref * sum);
        }
    }
    Err(Error::NonConvergence {
        what: "Bessel J ascending series",
        iterations: MAX_TERMS,
    })
}

/// Y_nu(z) from the ascending series of J_{+-nu}; integer orders use the
/// logarithmic Neumann series.
pub(crate) fn y_series(nu: f64, z: Complex64) -> Result<Complex64> {
    if nu == nu.trunc() {
        let y = y_integer_series(nu.abs() as usize, z)?;
        return Ok(if nu < 0.0 && (nu as i64) % 2 != 0 { -y } else { y });
    }
    y_series_nonint(nu, z)
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn y_integer_series(n: usize, z: Complex64) -> Result<Complex64> {
    let half = z * 0.5;
    let q = -half * half;
    let mut finite_part = Complex64::new(0.0, 0.0);
    if n > 0 {
        // sum_{k<n} (n-k-1)!/k! (z/2)^{2k-n}
        let mut fact_nk1: f64 = (1..n).map(|i| i as f64).product();
        let mut kfact = 1.0;
        let mut pow = half.powi(-(n as i32));
        let h2 = half * half;
        for k in 0..n {
            if k > 0 {
                kfact *= k as f64;
                fact_nk1 /= (n - k) as f64;
                pow *= h2;
            }
            finite_part += pow * (fact_nk1 / kfact);
        }
    }
    // psi(m+1) = -gamma + H_m
    let mut h_k = 0.0;
    let mut h_nk: f64 = (1..=n).map(|i| 1.0 / i as f64).sum();
    let nfact: f64 = (1..=n).map(|i| i as f64).product();
    let mut term = Complex64::new(1.0 / nfact, 0.0);
    let mut sum = term * (h_k + h_nk - 2.0 * EULER_GAMMA);
    let mut converged = false;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term = term * q / (kf * (n as f64 + kf));
        h_k += 1.0 / kf;
        h_nk += 1.0 / (n as f64 + kf);
        let del = term * (h_k + h_nk - 2.0 * EULER_GAMMA);
        sum += del;
        if del.norm() <= SERIES_TOL * sum.norm() && kf > q.norm().sqrt() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "Neumann series for Y",
            iterations: MAX_TERMS,
        });
    }
    let jn = j_series(n as f64, z)?;
    let hn = half.powi(n as i32);
    Ok((jn * half.ln() * 2.0 - finite_part - hn * sum) / PI)
}

fn y_series_nonint(nu: f64, z: Complex64) -> Result<Complex64> {
    let jp = j_series(nu, z)?;
    let jm = j_series(-nu, z)?;
    Ok((jp * cos_pi(nu) - jm) / sin_pi(nu))
}

/// Hankel large-argument expansions (H1, H2) at order mu; requires |z| large
/// compared with mu^2.
fn hankel_asymptotic(mu: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    let m4 = 4.0 * mu * mu;
    let i = Complex64::i();
    let inv8z = (z * 8.0).inv();
    let mut a = Complex64::new(1.0, 0.0);
    let mut s1 = a;
    let mut s2 = a;
    let mut prev = f64::INFINITY;
    let mut ik = Complex64::new(1.0, 0.0);
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a = a * (m4 - odd * odd) * inv8z / kf;
        ik *= i;
        let mag = a.norm();
        if mag > prev {
            break;
        }
        prev = mag;
        s1 += a * ik;
        s2 += a * ik.conj();
        if mag < 1e-17 {
            break;
        }
    }
    let w = Complex64::new(2.0 / PI, 0.0) / z;
    let root = w.sqrt();
    let phase = z - Complex64::new(PI * (0.5 * mu + 0.25), 0.0);
    let h1 = root * (i * phase).exp() * s1;
    let h2 = root * (-i * phase).exp() * s2;
    if !(h1.re.is_finite() && h1.im.is_finite() && h2.re.is_finite() && h2.im.is_finite()) {
        return Err(Error::Overflow { nu: mu, abs_z: z.norm() });
    }
    Ok((h1, h2))
}

/// Series cancellation e^{|z| - |Im z|} above which the Taylor continuation
/// takes over, and the largest |Im z|/|Re z| it is used for.
const CANCELLATION_LIMIT: f64 = 7.0;
const TAYLOR_MAX_RATIO: f64 = 0.6;

/// Taylor series of a cylinder function about the real point x0 > 0 from
/// its value and slope there; coefficients follow from
/// x^2 f'' + x f' + (x^2 - nu^2) f = 0. Needs |h| < x0.
fn taylor_continue(nu: f64, x0: f64, f0: f64, f1: f64, h: Complex64) -> Result<Complex64> {
    let mut c = [0.0, 0.0, f0, f1];
    let mut pow = h;
    let mut sum = Complex64::new(f0, 0.0) + h * f1;
    let mut small = 0;
    let a = x0 * x0 - nu * nu;
    for m in 0..2_000usize {
        let mf = m as f64;
        let next = -(x0 * (mf + 1.0) * (2.0 * mf + 1.0) * c[3] + (mf * mf + a) * c[2] + 2.0 * x0 * c[1] + c[0])
            / (x0 * x0 * (mf + 1.0) * (mf + 2.0));
        c = [c[1], c[2], c[3], next];
        pow *= h;
        let term = pow * next;
        sum += term;
        small = if term.norm() <= 1e-17 * sum.norm() { small + 1 } else { 0 };
        if small >= 4 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        what: "Bessel Taylor continuation",
        iterations: 2_000,
    })
}

/// (J_nu, Y_nu) near the positive real axis by continuation from x0 = Re z.
fn jy_near_axis(nu: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    let r = super::bessel_real::bessel_jy(nu, z.re)?;
    let h = Complex64::new(0.0, z.im);
    Ok((taylor_continue(nu, z.re, r.j, r.jp, h)?, taylor_continue(nu, z.re, r.y, r.yp, h)?))
}

/// (J_nu, Y_nu) for nu >= 0 and z off the positive real and imaginary axes.
pub(crate) fn jy_general(nu: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    debug_assert!(nu >= 0.0);
    if z.norm() < series_radius(nu) {
        let near_axis = z.norm() - z.im.abs() > CANCELLATION_LIMIT && z.im.abs() <= TAYLOR_MAX_RATIO * z.re.abs();
        if near_axis && z.re > 0.0 {
            return jy_near_axis(nu, z);
        }
        if near_axis {
            // z = w e^{+-i pi} with Re w > 0
            let w = -z;
            let (j, y) = jy_near_axis(nu, w)?;
            let s = z.im.signum();
            let e = Complex64::from_polar(1.0, s * PI * nu);
            let cross = Complex64::new(0.0, s * 2.0 * cos_pi(nu));
            return Ok((e * j, e.conj() * y + cross * j));
        }
        return Ok((j_series(nu, z)?, y_series(nu, z)?));
    }
    let n = nu.floor();
    let mu = nu - n;
    let (mut h1a, mut h2a) = hankel_asymptotic(mu, z)?;
    if n == 0.0 {
        return Ok(((h1a + h2a) * 0.5, (h1a - h2a) / Complex64::new(0.0, 2.0)));
    }
    let (mut h1b, mut h2b) = hankel_asymptotic(mu + 1.0, z)?;
    let two_over_z = Complex64::new(2.0, 0.0) / z;
    let mut order = mu + 1.0;
    for _ in 1..(n as usize) {
        let h1c = two_over_z * order * h1b - h1a;
        let h2c = two_over_z * order * h2b - h2a;
        h1a = h1b;
        h2a = h2b;
        h1b = h1c;
        h2b = h2c;
        order += 1.0;
    }
    Ok(((h1b + h2b) * 0.5, (h1b - h2b) / Complex64::new(0.0, 2.0)))
}
