//! Adaptive Dormand-Prince 5(4) integrator for small fixed-size real systems.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rtol: 1e-13,
            atol: 1e-300,
            max_steps: 2_000_000,
        }
    }
}

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrates y' = f(t, y) from t0 to t1 (either direction) and returns y(t1).
pub fn integrate<const N: usize, F>(f: F, t0: f64, t1: f64, y0: [f64; N], tol: Tolerance) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if t0 == t1 {
        return Ok(y0);
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut h = span * 1e-3;
    let mut k1 = f(t, &y);
    let mut steps = 0usize;
    while (t1 - t) * dir > 0.0 {
        steps += 1;
        if steps > tol.max_steps {
            return Err(Error::Ode(format!("exceeded {} steps", tol.max_steps)));
        }
        let remaining = (t1 - t).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let s = dir * h;
        let k2 = f(t + C2 * s, &axpy(&y, &[(A21, &k1)], s));
        let k3 = f(t + C3 * s, &axpy(&y, &[(A31, &k1), (A32, &k2)], s));
        let k4 = f(t + C4 * s, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], s));
        let k5 = f(
            t + C5 * s,
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], s),
        );
        let k6 = f(
            t + s,
            &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], s),
        );
        let y_new = axpy(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], s);
        let k7 = f(t + s, &y_new);
        // error measured against the max-norm of the state, so a component
        // passing through zero does not stall the step size
        let size = y.iter().chain(y_new.iter()).fold(0.0_f64, |a, v| a.max(v.abs()));
        let sc = tol.atol + tol.rtol * size;
        let mut err = 0.0_f64;
        for i in 0..N {
            let e = s * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() {
            h *= 0.1;
            if h < span * 1e-15 {
                return Err(Error::Ode("non-finite derivative".into()));
            }
            continue;
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + s };
            y = y_new;
            k1 = k7;
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            if h < span * 1e-15 {
                return Err(Error::Ode(format!("step size underflow at t = {t}")));
            }
        }
    }
    Ok(y)
}
