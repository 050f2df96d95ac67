//! Special functions of real (possibly negative, fractional) order and complex
//! argument: Bessel J, Hankel H1/H2, modified Bessel I/K on the real axis, and
//! the confluent hypergeometric function.
//!
//! Dispatch by argument:
//! - positive real axis: Steed's method with Temme's series (`bessel_real`);
//! - imaginary axis: the modified Bessel pair, J_nu(ix) = e^{i pi nu/2} I_nu(x);
//! - elsewhere: ascending series or Hankel asymptotics (`bessel_complex`).
//!
//! Negative orders go through J_{-mu} = cos(mu pi) J_mu - sin(mu pi) Y_mu and
//! the companion formula for Y.

mod bessel_complex;
mod bessel_real;
pub mod gamma;
mod kummer;

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use bessel_real::{bessel_ik_scaled, bessel_jy};
use gamma::{cos_pi, sin_pi};

pub use kummer::{hyp0f1, kummer_f};

/// Largest |order| accepted by the Bessel routines.
pub const MAX_ORDER: f64 = 1000.0;

pub type ComplexValue = Complex64;

/// Validated Bessel order.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Order(f64);

impl Order {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu.abs() > MAX_ORDER {
            return Err(Error::OrderOutOfRange(nu));
        }
        Ok(Order(nu))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 == self.0.trunc()
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;
    fn try_from(nu: f64) -> Result<Self> {
        Order::new(nu)
    }
}

/// J, Y and their z-derivatives at one (order, argument).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Cylinder {
    pub j: Complex64,
    pub y: Complex64,
    pub jp: Complex64,
    pub yp: Complex64,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn cis(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}

fn check_argument(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::param("z", format!("non-finite argument {z}")));
    }
    Ok(())
}

/// J and Y with derivatives for nu >= 0 and z != 0.
fn cylinder_nonneg(nu: f64, z: Complex64) -> Result<Cylinder> {
    if z.im == 0.0 && z.re > 0.0 {
        let r = bessel_jy(nu, z.re)?;
        return Ok(Cylinder {
            j: c(r.j),
            y: c(r.y),
            jp: c(r.jp),
            yp: c(r.yp),
        });
    }
    if z.re == 0.0 && z.im != 0.0 {
        let x = z.im.abs();
        let s = bessel_ik_scaled(nu, x)?;
        if x > 700.0 {
            return Err(Error::Overflow { nu, abs_z: x });
        }
        let ex = x.exp();
        let emx = (-x).exp();
        let (i, ip, k, kp) = (s.i * ex, s.ip * ex, s.k * emx, s.kp * emx);
        // z = i x: d/dz = -i d/dx
        let a = cis(FRAC_PI_2 * nu);
        let b = cis(FRAC_PI_2 * (nu + 1.0));
        let d = cis(-FRAC_PI_2 * nu) * (2.0 / PI);
        let mi = Complex64::new(0.0, -1.0);
        let mut out = Cylinder {
            j: a * i,
            y: b * i - d * k,
            jp: mi * a * ip,
            yp: mi * (b * ip - d * kp),
        };
        if z.im < 0.0 {
            out.j = out.j.conj();
            out.y = out.y.conj();
            out.jp = out.jp.conj();
            out.yp = out.yp.conj();
        }
        return Ok(out);
    }
    if z.im == 0.0 && z.re < 0.0 {
        // upper lip of the cut: z = x e^{i pi}
        let r = bessel_jy(nu, -z.re)?;
        let ep = cis(PI * nu);
        let em = cis(-PI * nu);
        let two_i_cos = Complex64::new(0.0, 2.0 * cos_pi(nu));
        // d/dz = -d/dx
        return Ok(Cylinder {
            j: ep * r.j,
            y: em * r.y + two_i_cos * r.j,
            jp: -(ep * r.jp),
            yp: -(em * r.yp + two_i_cos * r.jp),
        });
    }
    let (j, y) = bessel_complex::jy_general(nu, z)?;
    let (j1, y1) = bessel_complex::jy_general(nu + 1.0, z)?;
    let nz = c(nu) / z;
    Ok(Cylinder {
        j,
        y,
        jp: nz * j - j1,
        yp: nz * y - y1,
    })
}

/// J and Y with derivatives for any real order within range, z != 0.
pub(crate) fn cylinder(nu: f64, z: Complex64) -> Result<Cylinder> {
    Order::new(nu)?;
    check_argument(z)?;
    if z == c(0.0) {
        return Err(Error::SingularArgument("Bessel Y / Hankel"));
    }
    if nu >= 0.0 {
        return cylinder_nonneg(nu, z);
    }
    let mu = -nu;
    let p = cylinder_nonneg(mu, z)?;
    let (cs, sn) = (cos_pi(mu), sin_pi(mu));
    Ok(Cylinder {
        j: p.j * cs - p.y * sn,
        y: p.j * sn + p.y * cs,
        jp: p.jp * cs - p.yp * sn,
        yp: p.jp * sn + p.yp * cs,
    })
}

fn finite(v: Complex64, nu: f64, z: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { nu, abs_z: z.norm() })
    }
}

fn j_at_origin(nu: f64) -> Result<Complex64> {
    if nu == 0.0 {
        Ok(c(1.0))
    } else if nu > 0.0 || nu == nu.trunc() {
        Ok(c(0.0))
    } else {
        Err(Error::Overflow { nu, abs_z: 0.0 })
    }
}

/// Bessel function of the first kind J_nu(z).
pub fn bessel_j(nu: f64, z: Complex64) -> Result<Complex64> {
    Order::new(nu)?;
    check_argument(z)?;
    if z == c(0.0) {
        return j_at_origin(nu);
    }
    if nu >= 0.0 {
        // Y may overflow at large order and small |z| while J is fine
        let p = cylinder_nonneg(nu, z)?;
        return finite(p.j, nu, z);
    }
    if nu == nu.trunc() {
        let v = bessel_j(-nu, z)?;
        return Ok(if (nu as i64) % 2 == 0 { v } else { -v });
    }
    finite(cylinder(nu, z)?.j, nu, z)
}

/// dJ_nu/dz.
pub fn bessel_j_prime(nu: f64, z: Complex64) -> Result<Complex64> {
    Order::new(nu)?;
    check_argument(z)?;
    if z == c(0.0) {
        // (J_{nu-1} - J_{nu+1})/2 at the origin
        return Ok((j_at_origin(nu - 1.0)? - j_at_origin(nu + 1.0)?) * 0.5);
    }
    if nu >= 0.0 {
        let p = cylinder_nonneg(nu, z)?;
        return finite(p.jp, nu, z);
    }
    if nu == nu.trunc() {
        let v = bessel_j_prime(-nu, z)?;
        return Ok(if (nu as i64) % 2 == 0 { v } else { -v });
    }
    finite(cylinder(nu, z)?.jp, nu, z)
}

/// Bessel function of the second kind. Internal: the public surface exposes
/// only J and the Hankel pair.
pub fn bessel_y(nu: f64, z: Complex64) -> Result<Complex64> {
    finite(cylinder(nu, z)?.y, nu, z)
}

/// Hankel function of the first kind H1_nu(z) = J_nu + i Y_nu.
pub fn hankel1(nu: f64, z: Complex64) -> Result<Complex64> {
    let p = cylinder(nu, z)?;
    finite(p.j + Complex64::i() * p.y, nu, z)
}

/// Hankel function of the second kind H2_nu(z) = J_nu - i Y_nu.
pub fn hankel2(nu: f64, z: Complex64) -> Result<Complex64> {
    let p = cylinder(nu, z)?;
    finite(p.j - Complex64::i() * p.y, nu, z)
}

/// dH1_nu/dz.
pub fn hankel1_prime(nu: f64, z: Complex64) -> Result<Complex64> {
    let p = cylinder(nu, z)?;
    finite(p.jp + Complex64::i() * p.yp, nu, z)
}

/// dH2_nu/dz.
pub fn hankel2_prime(nu: f64, z: Complex64) -> Result<Complex64> {
    let p = cylinder(nu, z)?;
    finite(p.jp - Complex64::i() * p.yp, nu, z)
}

/// Modified Bessel I_nu(x) and I'_nu(x) for real signed order and x > 0,
/// both multiplied by e^{-x}.
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<(f64, f64)> {
    Order::new(nu)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::param("x", format!("need finite x > 0, got {x}")));
    }
    let mu = nu.abs();
    let s = bessel_ik_scaled(mu, x)?;
    if nu >= 0.0 || mu == mu.trunc() {
        return Ok((s.i, s.ip));
    }
    // I_{-mu} = I_mu + (2/pi) sin(mu pi) K_mu
    let w = 2.0 / PI * sin_pi(mu) * (-2.0 * x).exp();
    Ok((s.i + w * s.k, s.ip + w * s.kp))
}

/// Modified Bessel K_nu(x) and K'_nu(x) for x > 0, both multiplied by e^{x}.
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<(f64, f64)> {
    Order::new(nu)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::param("x", format!("need finite x > 0, got {x}")));
    }
    let s = bessel_ik_scaled(nu.abs(), x)?;
    Ok((s.k, s.kp))
}

/// J_{nu0 + n} (x) for n = 0..count on the positive real axis, by downward
/// recurrence from the top order.
pub fn bessel_j_sequence(nu0: f64, count: usize, x: f64) -> Result<Vec<f64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let top = nu0 + (count - 1) as f64;
    Order::new(nu0)?;
    Order::new(top)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::param("x", format!("need finite x > 0, got {x}")));
    }
    if nu0 < 0.0 {
        return (0..count)
            .map(|n| bessel_j(nu0 + n as f64, c(x)).map(|v| v.re))
            .collect();
    }
    let t = bessel_jy(top, x)?;
    let mut out = vec![0.0; count];
    if t.j == 0.0 || !t.j.is_finite() {
        for (n, slot) in out.iter_mut().enumerate() {
            *slot = bessel_jy(nu0 + n as f64, x)?.j;
        }
        return Ok(out);
    }
    out[count - 1] = t.j;
    if count >= 2 {
        out[count - 2] = t.jp + top / x * t.j;
    }
    for n in (0..count.saturating_sub(2)).rev() {
        let order = nu0 + (n + 1) as f64;
        out[n] = 2.0 * order / x * out[n + 1] - out[n + 2];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn origin_values() {
        assert_eq!(bessel_j(0.0, c(0.0)).unwrap(), c(1.0));
        assert_eq!(bessel_j(2.5, c(0.0)).unwrap(), c(0.0));
        assert_eq!(bessel_j_prime(0.0, c(0.0)).unwrap(), c(0.0));
        assert_eq!(bessel_j_prime(1.0, c(0.0)).unwrap(), c(0.5));
        assert!(matches!(bessel_j(-0.3, c(0.0)), Err(Error::Overflow { .. })));
        assert!(matches!(hankel1(0.3, c(0.0)), Err(Error::SingularArgument(_))));
    }

    #[test]
    fn order_range_enforced() {
        assert!(matches!(bessel_j(1000.5, c(1.0)), Err(Error::OrderOutOfRange(_))));
        assert!(bessel_j(f64::NAN, c(1.0)).is_err());
    }

    #[test]
    fn half_order_hankel() {
        let z = 1.0;
        let h = hankel1(0.5, c(z)).unwrap();
        let exact = Complex64::new(0.0, -1.0) * (2.0 / (PI * z)).sqrt() * cis(z);
        assert!(close(h, exact, 1e-14));
        let h2 = hankel2(0.5, c(z)).unwrap();
        assert!(close(h2, exact.conj(), 1e-14));
    }

    #[test]
    fn negative_real_axis_continuation() {
        let nu = 0.3;
        let z = c(-2.0);
        let via = bessel_j(nu, z).unwrap();
        let near = bessel_complex::j_series(nu, Complex64::new(-2.0, 1e-14)).unwrap();
        assert!(close(via, near, 1e-10));
    }

    #[test]
    fn imaginary_axis_matches_series() {
        for &nu in &[0.0, 0.7, -0.3, 2.0, -1.7] {
            for &x in &[0.5, 3.0, 12.0] {
                let z = Complex64::new(0.0, x);
                let a = bessel_j(nu, z).unwrap();
                let b = bessel_complex::j_series(nu, z).unwrap();
                assert!(close(a, b, 1e-12), "nu={nu} x={x} {a} {b}");
                let zc = z.conj();
                let a = bessel_j(nu, zc).unwrap();
                let b = bessel_complex::j_series(nu, zc).unwrap();
                assert!(close(a, b, 1e-12), "conj nu={nu} x={x}");
            }
        }
    }

    #[test]
    fn imaginary_axis_y_matches_series() {
        for &nu in &[0.7, -0.3, 1.25] {
            let z = Complex64::new(0.0, 3.0);
            let a = bessel_y(nu, z).unwrap();
            let b = bessel_complex::y_series(nu, z).unwrap();
            assert!(close(a, b, 1e-11), "nu={nu}");
        }
    }

    #[test]
    fn sequence_matches_direct() {
        for &(nu0, x) in &[(0.3, 5.0), (0.7, 120.0), (0.0, 0.01), (0.5, 400.0)] {
            let seq = bessel_j_sequence(nu0, 60, x).unwrap();
            for (n, v) in seq.iter().enumerate() {
                let d = bessel_j(nu0 + n as f64, c(x)).unwrap().re;
                assert!((v - d).abs() <= 1e-11 * d.abs().max(1e-3 * seq[0].abs().max(1e-300)),
                    "nu0={nu0} x={x} n={n} {v} {d}");
            }
        }
    }

    #[test]
    fn scaled_i_negative_order() {
        let (i, _) = bessel_i_scaled(-0.3, 2.0).unwrap();
        let j = bessel_j(-0.3, Complex64::new(0.0, 2.0)).unwrap();
        let expect = (j * cis(FRAC_PI_2 * 0.3)).re * (-2.0f64).exp();
        assert!((i - expect).abs() < 1e-14);
    }
}
