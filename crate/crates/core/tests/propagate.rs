mod common;

use abdirac::model::Coupling;
use abdirac::propagate::*;
use abdirac::Complex64;
use common::rel_err;
use std::f64::consts::PI;

fn cp(a: f64) -> Coupling {
    Coupling::new(a).unwrap()
}

fn pt(r: f64, rp: f64, th: f64, thp: f64, t: f64) -> GreensPoint {
    GreensPoint::new(r, rp, th, thp, t).unwrap()
}

#[test]
fn bracket_and_hankel_forms_agree() {
    for &a in &[0.1, 0.3, 0.5, 0.9, 1.3, -0.4] {
        for &r in &[0.2, 1.0, 7.0] {
            for &rp in &[0.5, 3.0] {
                for &t in &[0.05, 0.7, 4.0] {
                    let p = pt(r, rp, 0.4, -0.2, t);
                    let h = greens_diff_closed(&cp(a), 1.0, &p).unwrap();
                    let b = greens_diff_bracket(&cp(a), 1.0, &p).unwrap();
                    assert!(rel_err(b, h) < 1e-12, "a={a} r={r} rp={rp} t={t}: {h} {b}");
                }
            }
        }
    }
}

#[test]
fn half_order_kernel_value() {
    // alpha = 1.5, M = 1, r = 1, r' = 2, theta = 0.3, theta' = -0.1, t = 0.7
    let p = pt(1.0, 2.0, 0.3, -0.1, 0.7);
    let g = greens_diff_closed(&cp(1.5), 1.0, &p).unwrap();
    let frozen = Complex64::new(0.104_247_407_499_212_39, -0.025_512_412_359_619_385);
    assert!((g - frozen).norm() < 1e-14, "{g}");
    // H_{1/2}(x) = -i (2/pi x)^{1/2} e^{ix} makes the large-argument form exact
    let x = p.argument(1.0);
    let elementary = Complex64::from_polar(
        1.0 / (2.0 * PI * 0.7) * (2.0 / (PI * x)).sqrt(),
        0.25 * PI - 0.5 * PI + x + 5.0 / 1.4 + 0.4,
    );
    assert!((g - elementary).norm() < 1e-14);
    let p = pt(3.0, 4.0, 0.3, -0.1, 0.7);
    let a = greens_diff_asymptotic(&cp(1.5), 1.0, &p).unwrap();
    let c = greens_diff_closed(&cp(1.5), 1.0, &p).unwrap();
    assert!(rel_err(a, c) < 1e-12);
}

#[test]
fn kernel_vanishes_for_integer_coupling() {
    let p = pt(1.3, 1.3, 0.0, 0.0, 1.0);
    for a in [-1.0, 0.0, 2.0] {
        assert_eq!(greens_diff_closed(&cp(a), 1.0, &p).unwrap().norm(), 0.0);
        let o = greens_diff_integral_oracle(&cp(a), 1.0, &p, OracleOptions::default()).unwrap();
        assert_eq!(o.value.norm(), 0.0);
    }
}

#[test]
fn regularized_integral_matches_gaussian_closed_form() {
    // (1/2 pi)(1/2a) e^{-(r^2+r'^2)/4a}[I_{-f} - I_f](r r'/2a), a = eps + it/2M,
    // evaluated independently at 30 digits; alpha = 0.3, r = r' = 3^{1/2}, t = M = 1
    let frozen = [
        (0.02, Complex64::new(0.021_746_587_970_055_053, -0.041_024_695_995_502_836)),
        (0.01, Complex64::new(0.024_393_536_416_784_959, -0.046_347_156_963_273_0)),
        (0.005, Complex64::new(0.025_747_814_563_708_876, -0.049_310_696_670_070_31)),
    ];
    let s3 = 3f64.sqrt();
    let p = pt(s3, s3, 0.7, 0.7, 1.0);
    for (eps, want) in frozen {
        let got = greens_diff_regularized(&cp(0.3), 1.0, &p, eps, OracleOptions::default().quad).unwrap();
        assert!((got - want).norm() < 1e-11, "eps={eps} {got}");
    }
}

#[test]
fn integral_oracle_matches_closed_form() {
    let s3 = 3f64.sqrt();
    let p = pt(s3, s3, 0.4, 0.1, 1.0);
    let o = greens_diff_integral_oracle(&cp(0.3), 1.0, &p, OracleOptions::default()).unwrap();
    let c = greens_diff_closed(&cp(0.3), 1.0, &p).unwrap();
    assert!(rel_err(o.value, c) < 5e-3, "{} vs {c}", o.value);
    assert!(o.spread < 5e-3 * c.norm());
}

#[test]
fn integral_oracle_flags_coarse_extrapolation() {
    let s3 = 3f64.sqrt();
    let p = pt(s3, s3, 0.0, 0.0, 1.0);
    let opts = OracleOptions {
        epsilon: 0.5,
        ..OracleOptions::default()
    };
    let r = greens_diff_integral_oracle(&cp(0.3), 1.0, &p, opts);
    assert!(matches!(r, Err(abdirac::Error::Extrapolation { .. })), "{r:?}");
}

#[test]
fn diffusive_scaling_leaves_reduced_kernel_invariant() {
    let reduced = |p: &GreensPoint, g: Complex64| {
        g * (2.0 * PI * p.t) * Complex64::from_polar(1.0, -(p.r * p.r + p.r_prime * p.r_prime) / (2.0 * p.t))
    };
    let base = pt(1.2, 1.5, 0.3, 0.0, 0.8);
    let lam: f64 = 1.7;
    let scaled = pt(1.2 * lam, 1.5 * lam, 0.3, 0.0, 0.8 * lam * lam);
    let c0 = reduced(&base, greens_diff_closed(&cp(0.3), 1.0, &base).unwrap());
    let c1 = reduced(&scaled, greens_diff_closed(&cp(0.3), 1.0, &scaled).unwrap());
    assert!(rel_err(c0, c1) < 1e-12);
    let opts = OracleOptions {
        levels: 4,
        ..OracleOptions::default()
    };
    let o0 = reduced(&base, greens_diff_integral_oracle(&cp(0.3), 1.0, &base, opts).unwrap().value);
    let o1 = reduced(&scaled, greens_diff_integral_oracle(&cp(0.3), 1.0, &scaled, opts).unwrap().value);
    assert!(rel_err(o0, o1) < 5e-3, "{o0} {o1}");
}

#[test]
fn large_argument_form() {
    let a = cp(0.3);
    let p = pt(10.0, 10.0, 0.2, 0.0, 1.0);
    let ratio = greens_diff_asymptotic(&a, 1.0, &p).unwrap() / greens_diff_closed(&a, 1.0, &p).unwrap();
    assert!((ratio.norm() - 1.0).abs() < 0.02);
    let p = pt(5.0, 10.0, 0.2, 0.0, 1.0);
    let ratio = greens_diff_asymptotic(&a, 1.0, &p).unwrap() / greens_diff_closed(&a, 1.0, &p).unwrap();
    assert!(ratio.arg().abs() < 0.02, "{}", ratio.arg());
}

#[test]
fn integer_part_enters_as_a_phase() {
    for &(th, thp) in &[(0.0, 0.0), (0.7, -0.4), (3.0, 1.0)] {
        let p = pt(0.9, 2.1, th, thp, 0.6);
        let a = greens_diff_closed(&cp(1.3), 1.0, &p).unwrap();
        let b = greens_diff_closed(&cp(0.3), 1.0, &p).unwrap() * Complex64::from_polar(1.0, th - thp);
        assert!(rel_err(a, b) < 1e-13);
    }
}

#[test]
fn packet_normalization_and_support() {
    let cfg = PacketConfig::new(1.0, 20.0, 0.05, 50.0).unwrap();
    let n = packet_norm(&cfg, &cp(0.3)).unwrap();
    assert!((n - 1.0).abs() < 1e-3, "{n}");
    let peak = packet_initial(&cfg, &cp(0.3), 20.0, 0.05).norm();
    assert!((peak - 1.0 / PI.sqrt()).abs() < 1e-15);
    let desk = PacketConfig::desk(0.3).unwrap();
    assert!(packet_mass_near_cut(&desk, &cp(0.3), 0.5).unwrap() < 1e-12);
}

#[test]
fn closed_delta_factorizes_in_impact_parameter() {
    let tpl = PacketConfig::desk(0.0).unwrap();
    let c = cp(0.5);
    let t0 = tpl.transit_time(1.0, 20.0);
    let head_on = delta_closed(&tpl, &c, 1.0, 20.0, 0.0, t0).unwrap().norm();
    for &s in &[0.5, 1.0, 2.0, 3.0] {
        let cfg = PacketConfig::from_impact_parameter(2.0, 20.0, 2.0 * s, 50.0).unwrap();
        let t = cfg.transit_time(1.0, 20.0);
        let v = delta_closed(&cfg, &c, 1.0, 20.0, 0.0, t).unwrap().norm();
        assert!((v / head_on / (-0.5 * s * s).exp() - 1.0).abs() < 1e-12);
        for dt in [-0.02, 0.0, 0.02] {
            let u = delta_closed(&cfg, &c, 1.0, 20.0, 0.0, t0 + dt).unwrap().norm();
            assert!(u < head_on);
        }
    }
}

#[test]
fn closed_delta_vanishes_for_integer_coupling_and_mirrors() {
    let cfg = PacketConfig::desk(0.1).unwrap();
    let t = cfg.transit_time(1.0, 20.0);
    assert_eq!(delta_closed(&cfg, &cp(2.0), 1.0, 20.0, 0.3, t).unwrap().norm(), 0.0);
    assert_eq!(delta_quadrature(&cfg, &cp(1.0), 1.0, 20.0, 0.3, t).unwrap().value.norm(), 0.0);
    let neg = delta_closed(&cfg, &cp(-0.3), 1.0, 20.0, 0.2, t).unwrap();
    let pos = delta_closed(&cfg.with_theta0(-0.1).unwrap(), &cp(0.3), 1.0, 20.0, -0.2, t).unwrap();
    assert_eq!(neg, pos);
}

#[test]
fn printed_delta_constant_is_half_the_quadrature() {
    // the stationary-phase constant is 2^{1/2}/(pi delta), twice the
    // 1/(2^{1/2} pi delta) of the closed form; the remaining phase and
    // modulus offsets shrink like rho0/(k delta^2)
    let c = cp(0.5);
    for &(k, tol_mod, tol_arg) in &[(50.0, 0.02, 0.2), (800.0, 1e-3, 0.012)] {
        let cfg = PacketConfig::new(2.0, 20.0, 0.0, k).unwrap();
        let t = 2.0 * cfg.rho0 / k;
        let dc = delta_closed(&cfg, &c, 1.0, 20.0, 0.0, t).unwrap();
        let dq = delta_quadrature(&cfg, &c, 1.0, 20.0, 0.0, t).unwrap();
        let ratio = dq.value / dc;
        assert!((ratio.norm() / 2.0 - 1.0).abs() < tol_mod, "k={k} {ratio}");
        assert!(ratio.arg().abs() < tol_arg, "k={k} {ratio}");
    }
}

#[test]
fn suppression_rows_follow_the_gaussian_law() {
    let tpl = PacketConfig::desk(0.0).unwrap();
    let c = cp(0.5);
    // the closed form at its own envelope peaks; the quadrature at t = 2 rho0 M/k
    let cases = [
        (DeltaMethod::Closed, ScanTime::Matched),
        (DeltaMethod::Quadrature, ScanTime::Fixed(2.0 * tpl.rho0 / tpl.k)),
    ];
    for (m, time) in cases {
        let rows = suppression_scan(&tpl, &c, 1.0, 20.0, 0.0, time, &[0.0, 4.0, 6.0], m).unwrap();
        let r2 = rows[1].delta_abs / rows[0].delta_abs;
        let r3 = rows[2].delta_abs / rows[0].delta_abs;
        assert!((r2 / (-2.0f64).exp() - 1.0).abs() < 0.05, "{m:?} {r2}");
        assert!((r3 / (-4.5f64).exp() - 1.0).abs() < 0.08, "{m:?} {r3}");
        let zero = suppression_scan(&tpl, &c, 1.0, 20.0, 0.0, time, &[0.0], m).unwrap();
        assert_eq!(zero[0].gaussian, 1.0);
    }
}

#[test]
fn transit_envelope_is_gaussian_in_time() {
    let c = cp(0.5);
    let cfg = PacketConfig::desk(0.05).unwrap();
    let tc = cfg.transit_time(1.0, 20.0);
    let w = cfg.transit_width(1.0);
    let ts: Vec<f64> = (0..13).map(|i| tc + w * (-1.5 + 0.25 * i as f64)).collect();
    let closed: Vec<f64> = ts.iter().map(|&t| delta_closed(&cfg, &c, 1.0, 20.0, 0.0, t).unwrap().norm()).collect();
    let fit = fit_gaussian_transit(&ts, &closed).unwrap();
    assert!((fit.center / tc - 1.0).abs() < 0.02 && (fit.width / w - 1.0).abs() < 0.02);
    // with the exact kernel the envelope is broadened by (1 + (t/M delta^2)^2)^{1/2}
    let quad: Vec<f64> = ts.iter().map(|&t| delta_quadrature(&cfg, &c, 1.0, 20.0, 0.0, t).unwrap().value.norm()).collect();
    let fit = fit_gaussian_transit(&ts, &quad).unwrap();
    let broadened = w * (1.0 + (tc / (cfg.delta * cfg.delta)).powi(2)).sqrt();
    assert!((fit.center / tc - 1.0).abs() < 1e-3, "{fit:?}");
    assert!((fit.width / broadened - 1.0).abs() < 5e-3, "{fit:?} {broadened}");
}

#[test]
fn delta_rejects_nonpositive_time() {
    let cfg = PacketConfig::desk(0.05).unwrap();
    assert!(delta_closed(&cfg, &cp(0.5), 1.0, 20.0, 0.0, 0.0).is_err());
    assert!(delta_quadrature(&cfg, &cp(0.5), 1.0, 20.0, 0.0, -1.0).is_err());
}
