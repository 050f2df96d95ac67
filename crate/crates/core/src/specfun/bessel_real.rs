//! Bessel functions of real non-negative order and positive real argument.
//!
//! J and Y come from Steed's method: the continued fraction for J'/J fixes the
//! ratio at the requested order, downward recurrence carries it to an order
//! |mu| <= 1/2, and either Temme's series (x < 2) or the complex continued
//! fraction for (Y + iJ)'/(Y + iJ) (x >= 2) supplies the normalisation through
//! the Wronskian. For x >= 30 with order below 0.7x the Hankel expansion at
//! the fractional order plus upward recurrence is used instead, since the
//! continued fraction loses digits there. I and K follow the same pattern with Temme's series or the
//! Steed/Temme continued fraction for K. Everything involving I and K is
//! returned exponentially scaled so that large arguments do not overflow.

use std::f64::consts::PI;

use super::gamma::temme_gammas;
use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 2_000_000;
const XMIN: f64 = 2.0;
const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;
const ASYMPTOTIC_MIN_X: f64 = 30.0;
const ASYMPTOTIC_ORDER_FRACTION: f64 = 0.7;

/// Hankel expansion of H1_mu(x) for real x, mu in [0, 2).
fn hankel1_asymptotic(mu: f64, x: f64) -> (f64, f64) {
    let m4 = 4.0 * mu * mu;
    let inv8x = 1.0 / (8.0 * x);
    // P + iQ accumulated as sum i^k a_k
    let (mut p, mut q) = (1.0, 0.0);
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..400 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (m4 - odd * odd) * inv8x / kf;
        if a.abs() > prev {
            break;
        }
        prev = a.abs();
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a.abs() < 1e-18 {
            break;
        }
    }
    let amp = (2.0 / (PI * x)).sqrt();
    let phase = x - PI * (0.5 * mu + 0.25);
    let (s, c) = phase.sin_cos();
    // (P + iQ)(cos + i sin)
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

/// Large-x path: expansion at the fractional order and upward recurrence,
/// stable while the order stays below x.
fn jy_asymptotic_recur(nu: f64, x: f64) -> Result<Jy> {
    let n = nu.floor() as usize;
    let mu = nu - n as f64;
    let (mut ja, mut ya) = hankel1_asymptotic(mu, x);
    let (mut jb, mut yb) = hankel1_asymptotic(mu + 1.0, x);
    let mut order = mu + 1.0;
    for _ in 0..n {
        let jc = 2.0 * order / x * jb - ja;
        let yc = 2.0 * order / x * yb - ya;
        ja = jb;
        ya = yb;
        jb = jc;
        yb = yc;
        order += 1.0;
    }
    // (ja, ya) at nu, (jb, yb) at nu + 1
    Ok(Jy {
        j: ja,
        y: ya,
        jp: nu / x * ja - jb,
        yp: nu / x * ya - yb,
    })
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Jy {
    pub j: f64,
    pub y: f64,
    pub jp: f64,
    pub yp: f64,
}

/// Scaled modified Bessel values: i, ip carry e^{-x}; k, kp carry e^{x}.
#[derive(Debug, Clone, Copy)]
pub(crate) struct IkScaled {
    pub i: f64,
    pub k: f64,
    pub ip: f64,
    pub kp: f64,
}

pub(crate) fn bessel_jy(nu: f64, x: f64) -> Result<Jy> {
    debug_assert!(nu >= 0.0 && x > 0.0);
    if x >= ASYMPTOTIC_MIN_X && nu < ASYMPTOTIC_ORDER_FRACTION * x {
        return jy_asymptotic_recur(nu, x);
    }
    let nl = if x < XMIN {
        (nu + 0.5) as usize
    } else {
        (nu - x + 1.5).max(0.0) as usize
    };
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: J'_nu / J_nu by modified Lentz
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "Bessel J continued fraction",
            iterations: MAXIT,
        });
    }

    let mut rjl = isign;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > RESCALE_ABOVE {
            rjl *= RESCALE_BY;
            rjpl *= RESCALE_BY;
            rjl1 *= RESCALE_BY;
            rjp1 *= RESCALE_BY;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, rymu, ry1);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let e = e.exp();
        let mut p = e / (gampl * PI);
        let mut q = 1.0 / (e * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS {
            1.0
        } else {
            pimu2.sin() / pimu2
        };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let d = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut ok = false;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::NonConvergence {
                what: "Temme series for Y",
                iterations: MAXIT,
            });
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        let (p, q) = steed_cf2(xmu2, x)?;
        let gam = (p - f) / q;
        let mut rj = (w / ((p - f) * gam + q)).sqrt();
        if rjl < 0.0 {
            rj = -rj;
        }
        rjmu = rj;
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    let fact = rjmu / rjl;
    let j = rjl1 * fact;
    let jp = rjp1 * fact;
    let mut ymu = rymu;
    let mut y1 = ry1;
    for i in 1..=nl {
        let ytemp = (xmu + i as f64) * xi2 * y1 - ymu;
        ymu = y1;
        y1 = ytemp;
    }
    let y = ymu;
    let yp = nu * xi * ymu - y1;
    Ok(Jy { j, y, jp, yp })
}

/// Steed's complex continued fraction p + iq = (J' + iY')/(J + iY) at order mu.
fn steed_cf2(xmu2: f64, x: f64) -> Result<(f64, f64)> {
    let xi = 1.0 / x;
    let mut a = 0.25 - xmu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fact = a * xi / (p * p + q * q);
    let mut cr = br + q * fact;
    let mut ci = bi + p * fact;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for i in 2..MAXIT {
        a += 2.0 * (i as f64 - 1.0);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            return Ok((p, q));
        }
    }
    Err(Error::NonConvergence {
        what: "Steed continued fraction",
        iterations: MAXIT,
    })
}

pub(crate) fn bessel_ik_scaled(nu: f64, x: f64) -> Result<IkScaled> {
    debug_assert!(nu >= 0.0 && x > 0.0);
    let nl = (nu + 0.5) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;

    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAXIT {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "Bessel I continued fraction",
            iterations: MAXIT,
        });
    }
    let mut ril = 1.0;
    let mut ripl = h * ril;
    let mut ril1 = ril;
    let mut rip1 = ripl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
        if ril.abs() > RESCALE_ABOVE {
            ril *= RESCALE_BY;
            ripl *= RESCALE_BY;
            ril1 *= RESCALE_BY;
            rip1 *= RESCALE_BY;
        }
    }
    let f = ripl / ril;

    // scaled: kmu, k1 carry e^{x}
    let (kmu, k1);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let e = e.exp();
        let mut p = 0.5 * e / gampl;
        let mut q = 0.5 / (e * gammi);
        let mut c = 1.0;
        let d = x2 * x2;
        let mut sum1 = p;
        let mut ok = false;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= d / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::NonConvergence {
                what: "Temme series for K",
                iterations: MAXIT,
            });
        }
        let ex = x.exp();
        kmu = sum * ex;
        k1 = sum1 * xi2 * ex;
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - xmu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut ok = false;
        for i in 2..MAXIT {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::NonConvergence {
                what: "Steed/Temme continued fraction for K",
                iterations: MAXIT,
            });
        }
        h *= a1;
        kmu = (PI / (2.0 * x)).sqrt() / s;
        k1 = kmu * (xmu + x + 0.5 - h) * xi;
    }
    let kmup = xmu * xi * kmu - k1;
    let imu = xi / (f * kmu - kmup);
    let i = imu * ril1 / ril;
    let ip = imu * rip1 / ril;
    let mut km = kmu;
    let mut kk1 = k1;
    for n in 1..=nl {
        let ktemp = (xmu + n as f64) * xi2 * kk1 + km;
        km = kk1;
        kk1 = ktemp;
    }
    let k = km;
    let kp = nu * xi * km - kk1;
    if !k.is_finite() || !kp.is_finite() {
        return Err(Error::Overflow { nu, abs_z: x });
    }
    Ok(IkScaled { i, k, ip, kp })
}
