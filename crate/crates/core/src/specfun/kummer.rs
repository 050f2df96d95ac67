use num_complex::Complex64;

use crate::error::{Error, Result};

const TOL: f64 = 1e-15;
const MAX_TERMS: usize = 100_000;

fn is_pole(c: Complex64) -> bool {
    c.im == 0.0 && c.re <= 0.0 && c.re == c.re.trunc()
}

/// Confluent hypergeometric function 1F1(a; c; z) by its defining series.
/// Intended for moderate |z|; no continuation is attempted.
pub fn kummer_f(a: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    if is_pole(c) {
        return Err(Error::HypergeometricPole(c.re));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term = term * (a + nf) * z / ((c + nf) * (nf + 1.0));
        sum += term;
        if term.norm() <= TOL * sum.norm() && (nf + 1.0) > z.norm() {
            return Ok(sum);
        }
        if term == Complex64::new(0.0, 0.0) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        what: "Kummer series",
        iterations: MAX_TERMS,
    })
}

/// 0F1(; b; z) by its defining series.
pub fn hyp0f1(b: Complex64, z: Complex64) -> Result<Complex64> {
    if is_pole(b) {
        return Err(Error::HypergeometricPole(b.re));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term = term * z / ((b + nf) * (nf + 1.0));
        sum += term;
        if term.norm() <= TOL * sum.norm() && (nf + 1.0) * (nf + 1.0) > z.norm() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        what: "0F1 series",
        iterations: MAX_TERMS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn zero_argument_is_one() {
        assert_eq!(kummer_f(r(2.3), r(0.7), r(0.0)).unwrap(), r(1.0));
    }

    #[test]
    fn equal_parameters_give_exponential() {
        let v = kummer_f(r(1.7), r(1.7), r(1.5)).unwrap();
        assert!((v - r(1.5f64.exp())).norm() < 1e-14 * 4.5);
    }

    #[test]
    fn poles_rejected() {
        assert!(matches!(
            kummer_f(r(1.0), r(-2.0), r(0.5)),
            Err(Error::HypergeometricPole(_))
        ));
    }

    #[test]
    fn terminating_series_is_laguerre_like() {
        // 1F1(-2; 1; z) = 1 - 2z + z^2/2
        let z = r(0.8);
        let v = kummer_f(r(-2.0), r(1.0), z).unwrap();
        assert!((v - (r(1.0) - z * 2.0 + z * z * 0.5)).norm() < 1e-15);
    }

    #[test]
    fn hyp0f1_gives_cosine() {
        // 0F1(; 1/2; -x^2/4) = cos x
        let x = 2.3;
        let v = hyp0f1(r(0.5), r(-x * x / 4.0)).unwrap();
        assert!((v.re - x.cos()).abs() < 1e-14);
    }
}
