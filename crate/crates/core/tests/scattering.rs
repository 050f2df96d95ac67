mod common;

use abdirac::model::{make_kinematics, Coupling, Kinematics, SpinorAmplitudes, UnitSystem};
use abdirac::scattering::*;
use abdirac::specfun::bessel_j;
use abdirac::Complex64;
use common::rel_err;
use std::f64::consts::PI;

fn kin1() -> Kinematics {
    make_kinematics(2f64.sqrt(), 1.0, None).unwrap()
}

fn cp(a: f64) -> Coupling {
    Coupling::new(a).unwrap()
}

fn amps(a1: Complex64, a2: Complex64) -> SpinorAmplitudes {
    SpinorAmplitudes::new(a1, a2).unwrap()
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// e^{ikr + i pi/4} sin(pi alpha) / (cos(theta/2) (2 pi kr)^{1/2})
fn scattered_factor(alpha: f64, x: f64, theta: f64) -> Complex64 {
    Complex64::from_polar((PI * alpha).sin() / (0.5 * theta).cos() / (2.0 * PI * x).sqrt(), x + 0.25 * PI)
}

#[test]
fn jacobi_anger_at_zero_flux() {
    let kin = kin1();
    let c = cp(0.0);
    for i in 0..=10 {
        let r = 5.0 * i as f64;
        for j in 0..12 {
            let t = -PI + (j as f64 + 0.5) * PI / 6.0;
            let v = ab_wavefunction(&c, &kin, r, t, 1e-15).unwrap();
            let want = Complex64::from_polar(1.0, -r * t.cos());
            assert!((v - want).norm() < 1e-10, "r={r} t={t} {v} {want}");
        }
    }
}

#[test]
fn spinless_sum_single_valued() {
    let kin = kin1();
    for &a in &[0.25, 0.5, 1.7, -0.4] {
        let c = cp(a);
        for &t in &[-2.0, 0.3, 1.9] {
            let u = ab_wavefunction(&c, &kin, 12.0, t, 1e-15).unwrap();
            let v = ab_wavefunction(&c, &kin, 12.0, t + 2.0 * PI, 1e-15).unwrap();
            assert!((u - v).norm() < 1e-12, "a={a} t={t}");
        }
    }
}

#[test]
fn spinless_scattered_part_matches_asymptotics() {
    let kin = kin1();
    let (a, x, t) = (0.5, 200.0, PI / 3.0);
    let psi = ab_wavefunction(&cp(a), &kin, x, t, 1e-15).unwrap();
    let scattered = psi - Complex64::from_polar(1.0, -x * t.cos() + a * t);
    let closed = -Complex64::from_polar(1.0, 0.5 * t) * scattered_factor(a, x, t);
    assert!(rel_err(scattered, closed) < 0.01, "{scattered} vs {closed}");
}

#[test]
fn bare_scalar_differs_by_l0_swap() {
    let kin = kin1();
    let a = 0.3;
    let c = cp(a);
    for &(r, t) in &[(0.7, 0.2), (3.0, -1.1), (9.0, 2.5)] {
        let b = bare_wavefunction_scalar(&c, &kin, r, t, 1e-15).unwrap();
        let s = ab_wavefunction(&c, &kin, r, t, 1e-15).unwrap();
        let z = Complex64::new(r, 0.0);
        let want = Complex64::from_polar(1.0, 0.5 * PI * a) * bessel_j(-a, z).unwrap()
            - Complex64::from_polar(1.0, -0.5 * PI * a) * bessel_j(a, z).unwrap();
        assert!((b - s - want).norm() < 1e-13);
    }
    assert!(bare_wavefunction_scalar(&cp(1.2), &kin, 1.0, 0.0, 1e-12).is_err());
}

#[test]
fn bare_scalar_diverges_at_origin() {
    let kin = kin1();
    let c = cp(0.5);
    let b1 = bare_wavefunction_scalar(&c, &kin, 1e-6, 0.4, 1e-15).unwrap().norm();
    let b2 = bare_wavefunction_scalar(&c, &kin, 1e-8, 0.4, 1e-15).unwrap().norm();
    assert!((b2 / b1 - 10.0).abs() < 1e-3, "{}", b2 / b1);
    let s = ab_wavefunction(&c, &kin, 1e-8, 0.4, 1e-15).unwrap().norm();
    assert!(s < 1e-3);
}

#[test]
fn bare_scalar_matches_its_asymptotics() {
    let kin = kin1();
    let (a, x, t) = (0.25, 150.0, PI / 4.0);
    let psi = bare_wavefunction_scalar(&cp(a), &kin, x, t, 1e-15).unwrap();
    let scattered = psi - Complex64::from_polar(1.0, -x * t.cos() + a * t);
    let closed = Complex64::from_polar(1.0, -0.5 * t) * scattered_factor(a, x, t);
    assert!(rel_err(scattered, closed) < 0.01, "{scattered} vs {closed}");
}

#[test]
fn spinor_values_at_moderate_kr() {
    // a1 = 1, a2 = 0, alpha = 0.5, kr = 10, theta = pi/2, E = sqrt(2) Mc^2
    let kin = kin1();
    let p = amps(one(), zero());
    let sh = dirac_scattering_state(StateKind::Shielded, &p, &cp(0.5), &kin, 10.0, PI / 2.0).unwrap();
    let bare = dirac_scattering_state(StateKind::Bare, &p, &cp(0.5), &kin, 10.0, PI / 2.0).unwrap();
    let want_sh = [
        Complex64::new(0.617_960_348_218_048_08, 0.860_458_809_409_429_83),
        zero(),
        zero(),
        Complex64::new(-0.358_179_265_943_522_07, -0.334_609_234_801_297_73),
    ];
    let want_bare = [
        Complex64::new(0.565_319_691_561_194_65, 0.613_697_916_025_787_28),
        zero(),
        zero(),
        Complex64::new(-0.255_967_557_240_715_99, -0.356_413_708_720_791_97),
    ];
    for i in 0..4 {
        assert!((sh.chi[i] - want_sh[i]).norm() < 1e-12, "shielded {i}");
        assert!((bare.chi[i] - want_bare[i]).norm() < 1e-12, "bare {i}");
    }
}

#[test]
fn spin_down_incidence_sees_no_difference() {
    let kin = kin1();
    let p = amps(zero(), Complex64::new(0.3, -0.9));
    for &a in &[0.25, 0.5, 0.75] {
        for &(r, t) in &[(0.1, 0.3), (2.0, -2.0), (30.0, 1.0)] {
            let s = dirac_scattering_state(StateKind::Shielded, &p, &cp(a), &kin, r, t).unwrap();
            let b = dirac_scattering_state(StateKind::Bare, &p, &cp(a), &kin, r, t).unwrap();
            assert_eq!(s.chi, b.chi);
        }
    }
}

#[test]
fn bare_minus_shielded_is_the_extra_column() {
    let kin = kin1();
    let p = amps(Complex64::new(0.6, 0.1), Complex64::new(0.2, 0.7));
    for &a in &[0.25, 0.5, 0.75, 1.5] {
        for &(r, t) in &[(0.05, 0.3), (2.0, -2.0), (30.0, 1.0)] {
            let s = dirac_scattering_state(StateKind::Shielded, &p, &cp(a), &kin, r, t).unwrap();
            let b = dirac_scattering_state(StateKind::Bare, &p, &cp(a), &kin, r, t).unwrap();
            let col = bare_extra_correction(&p, &cp(a), &kin, r, t).unwrap();
            for i in 0..4 {
                let d = b.chi[i] - s.chi[i];
                assert!((d - col[i]).norm() <= 1e-10 * col[i].norm().max(1.0), "a={a} r={r} {i}");
            }
        }
    }
}

#[test]
fn lower_components_vanish_linearly_in_the_nonrelativistic_limit() {
    let p = amps(one(), Complex64::new(0.0, 1.0));
    let c = cp(0.5);
    let (x, t) = (3.0, 1.2);
    let mut prev: Option<(f64, [f64; 2])> = None;
    for &ratio in &[1e-3, 1e-2, 1e-1] {
        let kin = Kinematics::from_wavenumber(UnitSystem::NATURAL, ratio, 1.0, None).unwrap();
        let s = dirac_scattering_state(StateKind::Shielded, &p, &c, &kin, x / ratio, t).unwrap();
        let mags = [s.chi[2].norm(), s.chi[3].norm()];
        if let Some((pr, pm)) = prev {
            for i in 0..2 {
                let slope = (mags[i] / pm[i]).ln() / (ratio / pr).ln();
                assert!((slope - 1.0).abs() < 0.01, "{slope}");
            }
        }
        prev = Some((ratio, mags));
    }
}

#[test]
fn asymptotic_state_matches_partial_waves() {
    let kin = kin1();
    let cases = [amps(one(), zero()), amps(zero(), one()), amps(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8))];
    for kind in [StateKind::Shielded, StateKind::Bare] {
        for &a in &[0.25, 0.5, 0.75] {
            for &x in &[100.0, 400.0] {
                for &t in &[PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
                    for &t in &[t, -t] {
                        for p in &cases {
                            let ex = dirac_scattering_state(kind, p, &cp(a), &kin, x, t).unwrap();
                            let asy = asymptotic_state(kind, p, &cp(a), &kin, x, t).unwrap();
                            let tol = 0.01f64.max(3.0 / x);
                            for i in 0..4 {
                                if ex.chi[i] == zero() {
                                    assert!(asy.chi[i].norm() < 1e-15);
                                    continue;
                                }
                                let e = rel_err(asy.chi[i], ex.chi[i]);
                                assert!(e < tol, "{kind:?} a={a} x={x} t={t} comp {i}: {e}");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn asymptotic_state_half_percent_at_large_kr() {
    let kin = kin1();
    let p = amps(one(), one());
    let t = 2.0 * PI / 3.0;
    for kind in [StateKind::Shielded, StateKind::Bare] {
        let ex = dirac_scattering_state(kind, &p, &cp(0.5), &kin, 400.0, t).unwrap();
        let asy = asymptotic_state(kind, &p, &cp(0.5), &kin, 400.0, t).unwrap();
        for i in 0..4 {
            assert!(rel_err(asy.chi[i], ex.chi[i]) < 0.005, "{kind:?} {i}");
        }
    }
}

#[test]
fn scattered_moduli_agree_between_kinds() {
    let kin = kin1();
    let p = amps(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
    let a = 0.3;
    for &t in &[-2.0f64, -0.5, 0.0, 1.0, 2.9] {
        let x = 80.0;
        let inc = Complex64::from_polar(1.0, -x * t.cos() + a * t);
        let s = asymptotic_state(StateKind::Shielded, &p, &cp(a), &kin, x, t).unwrap();
        let b = asymptotic_state(StateKind::Bare, &p, &cp(a), &kin, x, t).unwrap();
        let c = lower_ratio(&kin);
        let inc_spinor = [p.a1, p.a2, -c * p.a2, -c * p.a1];
        for i in 0..4 {
            let ss = (s.chi[i] - inc_spinor[i] * inc).norm();
            let bs = (b.chi[i] - inc_spinor[i] * inc).norm();
            assert!((ss - bs).abs() < 1e-14, "t={t} {i}");
        }
    }
}

#[test]
fn amplitude_properties() {
    let kin = kin1();
    assert_eq!(scattering_amplitude(&cp(2.0), &kin, 0.7).unwrap().norm(), 0.0);
    let f0 = differential_cross_section(&cp(0.5), &kin, 0.0).unwrap();
    assert!((f0 - 1.0 / (2.0 * PI)).abs() < 1e-15);
    for &t in &[0.3, 1.4, 2.8] {
        let a = scattering_amplitude(&cp(0.3), &kin, t).unwrap().norm();
        let b = scattering_amplitude(&cp(0.3), &kin, -t).unwrap().norm();
        let c = scattering_amplitude(&cp(1.3), &kin, t).unwrap().norm();
        assert!((a - b).abs() < 1e-15 && (a - c).abs() < 1e-14);
    }
}

#[test]
fn integrated_cross_section_value() {
    let kin = kin1();
    let v = integrated_cross_section(&cp(0.3), &kin, 0.1).unwrap();
    // closed form sin^2(pi alpha)/(2 pi k) 4 cot(cut/2)
    let closed = (0.3 * PI).sin().powi(2) / (2.0 * PI) * 4.0 / (0.05f64).tan();
    let frozen = 8.326_515_301_300_42;
    assert!((closed - frozen).abs() < 1e-12);
    assert!((v - frozen).abs() < 1e-10 * frozen, "{v}");
}
