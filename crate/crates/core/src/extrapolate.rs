//! Richardson elimination over geometric sequences.

use num_complex::Complex64;

/// Limit x -> 0 of values v_j sampled at x_j = x_0 q^j (0 < q < 1), assuming
/// v(x) = L + sum_i c_i x^{p_i}. Each exponent removes one term and consumes
/// one sample; the returned pair is (estimate, spread of the last two
/// partial estimates).
pub fn richardson_geometric(values: &[Complex64], q: f64, exponents: &[f64]) -> (Complex64, f64) {
    assert!(!values.is_empty());
    let mut row: Vec<Complex64> = values.to_vec();
    for &p in exponents {
        if row.len() < 2 {
            break;
        }
        let qp = q.powf(p);
        row = row
            .windows(2)
            .map(|w| (w[1] - w[0] * qp) / (1.0 - qp))
            .collect();
    }
    let est = *row.last().unwrap();
    let spread = if row.len() >= 2 {
        (row[row.len() - 1] - row[row.len() - 2]).norm()
    } else {
        0.0
    };
    (est, spread)
}

/// Limit eps -> 0 of values at eps, eps/2, eps/4, ... for an analytic
/// dependence on eps (integer exponents 1, 2, ...).
pub fn richardson_halving(values: &[Complex64]) -> (Complex64, f64) {
    let exps: Vec<f64> = (1..values.len()).map(|p| p as f64).collect();
    richardson_geometric(values, 0.5, &exps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn removes_power_terms() {
        let f = |x: f64| Complex64::new(2.0 + 3.0 * x.powf(0.6) - x * x, 0.0);
        let q: f64 = 0.1;
        let vals: Vec<_> = (0..3).map(|j| f(1e-1 * q.powi(j))).collect();
        let (est, _) = richardson_geometric(&vals, q, &[0.6, 2.0]);
        assert!((est.re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn halving_is_exact_on_quadratics() {
        let f = |e: f64| Complex64::new(1.0 + e - 4.0 * e * e, 0.5 * e);
        let vals: Vec<_> = [0.02, 0.01, 0.005].iter().map(|&e| f(e)).collect();
        let (est, _) = richardson_halving(&vals);
        assert!((est - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }
}
