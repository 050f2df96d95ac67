//! Invariant suites behind `abdirac verify`.
//!
//! Each check records the measured and expected value, the error measure
//! and its tolerance. Suites: si, specfun, bare, ode, shielded, scattering,
//! greens, packet, nonrel.

use std::f64::consts::PI;

use super::config::Params;
use super::table::{base_metadata, Table};
use super::CliError;
use crate::bare_tube::{
    anomalous_channel, anomalous_limit, matching_at_kr0, matching_coefficient, matching_limit,
    ode_matching_coefficient, Channel,
};
use crate::error::Result;
use crate::model::{si_worked_numbers, Coupling, Kinematics, SpinorAmplitudes, TubeConfig, UnitSystem};
use crate::propagate::{
    delta_closed, delta_quadrature, greens_diff_asymptotic, greens_diff_bracket, greens_diff_closed,
    greens_diff_integral_oracle, packet_norm, GreensPoint, OracleOptions, PacketConfig,
};
use crate::scattering::{ab_wavefunction, asymptotic_state, dirac_scattering_state, shielded_correction, StateKind};
use crate::shielded::{kinematics_for_ratios, shielded_matching};
use crate::specfun::{bessel_i_scaled, bessel_j, bessel_j_prime, hankel1, hankel1_prime};
use crate::Complex64;

pub const SUITES: [&str; 9] = ["si", "specfun", "bare", "ode", "shielded", "scattering", "greens", "packet", "nonrel"];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub expected: f64,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn abs(&mut self, suite: &'static str, name: impl Into<String>, measured: f64, expected: f64, tol: f64) {
        let error = (measured - expected).abs();
        self.checks.push(Check {
            suite,
            name: name.into(),
            measured,
            expected,
            error,
            tolerance: tol,
            pass: error <= tol,
        });
    }

    fn rel(&mut self, suite: &'static str, name: impl Into<String>, measured: f64, expected: f64, tol: f64) {
        let error = (measured - expected).abs() / expected.abs();
        self.checks.push(Check {
            suite,
            name: name.into(),
            measured,
            expected,
            error,
            tolerance: tol,
            pass: error <= tol,
        });
    }

    /// Complex comparison, reported through moduli with a relative error of
    /// the difference.
    fn rel_c(&mut self, suite: &'static str, name: impl Into<String>, measured: Complex64, expected: Complex64, tol: f64) {
        let error = (measured - expected).norm() / expected.norm();
        self.checks.push(Check {
            suite,
            name: name.into(),
            measured: measured.norm(),
            expected: expected.norm(),
            error,
            tolerance: tol,
            pass: error <= tol,
        });
    }

    fn failed(&mut self, suite: &'static str, name: impl Into<String>, err: impl std::fmt::Display) {
        self.checks.push(Check {
            suite,
            name: format!("{} ({err})", name.into()),
            measured: f64::NAN,
            expected: f64::NAN,
            error: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
        });
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{}/{}", c.suite, c.name))
            .collect()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["suite", "check", "measured", "expected", "error", "tolerance", "pass"]);
        t.metadata.extend(base_metadata("verify"));
        t.meta("checks", self.checks.len());
        t.meta("failures", self.failures().len());
        for c in &self.checks {
            t.push(vec![
                c.suite.into(),
                c.name.clone().into(),
                c.measured.into(),
                c.expected.into(),
                c.error.into(),
                c.tolerance.into(),
                (if c.pass { "true" } else { "false" }).into(),
            ]);
        }
        t
    }
}

/// Runs the suites named by `suite` (comma list), or all of them.
pub fn run_verify(params: &Params) -> std::result::Result<Report, CliError> {
    let selected: Vec<&str> = match params.raw("suite") {
        None => SUITES.to_vec(),
        Some(s) => {
            let names: Vec<&str> = s.split(',').map(str::trim).collect();
            if let Some(bad) = names.iter().find(|n| !SUITES.contains(n)) {
                return Err(CliError::Config(format!(
                    "`suite`: unknown suite `{bad}`, expected one of {}",
                    SUITES.join(", ")
                )));
            }
            names
        }
    };
    let mut report = Report::default();
    for name in SUITES.iter().filter(|s| selected.contains(s)) {
        let res = match *name {
            "si" => si(&mut report),
            "specfun" => specfun(&mut report),
            "bare" => bare(&mut report),
            "ode" => ode(&mut report),
            "shielded" => shielded(&mut report),
            "scattering" => scattering(&mut report),
            "greens" => greens(&mut report),
            "packet" => packet(&mut report),
            _ => nonrel(&mut report),
        };
        if let Err(e) = res {
            let suite = SUITES.iter().find(|s| *s == name).copied().unwrap_or("verify");
            report.failed(suite, "suite aborted", e);
        }
    }
    Ok(report)
}

/// Rounds to n significant figures.
fn sig(x: f64, n: i32) -> f64 {
    let e = x.abs().log10().floor() as i32;
    let p = 10f64.powi(n - 1 - e);
    (x * p).round() / p
}

fn si(r: &mut Report) -> Result<()> {
    let s = si_worked_numbers();
    r.rel("si", "k R0 (2 s.f.)", sig(s.k_r_outer, 2), 0.16, 1e-12);
    r.rel("si", "Mc R0/hbar (3 s.f.)", sig(s.mc_r_outer_over_hbar, 3), 2.59, 1e-12);
    r.rel("si", "exp(-2Mc R0/hbar) (2 s.f.)", sig(s.shielding_factor, 2), 5.6e-3, 1e-12);
    r.rel("si", "k1 r_h/2e (2 s.f.)", sig(s.k1_r_half_quantum, 2), 2.9e3, 1e-12);
    r.rel("si", "k1 (3 s.f.)", sig(s.k1_tilde, 3), 1.62e11, 1e-12);
    r.rel("si", "hbar/Mc (3 s.f.)", sig(s.compton_length, 3), 3.86e-13, 1e-12);
    Ok(())
}

fn specfun(r: &mut Report) -> Result<()> {
    let c = |x: f64| Complex64::new(x, 0.0);
    for &nu in &[0.3, 1.7, -0.3, 2.5] {
        for &x in &[0.5, 3.0, 25.0] {
            let z = c(x);
            let (j, jp) = (bessel_j(nu, z)?, bessel_j_prime(nu, z)?);
            let (h, hp) = (hankel1(nu, z)?, hankel1_prime(nu, z)?);
            let w = j * hp - jp * h;
            r.rel_c("specfun", format!("wronskian nu={nu} x={x}"), w, Complex64::new(0.0, 2.0 / (PI * x)), 1e-10);
            let lhs = -Complex64::i() * (PI * nu).sin() * h;
            let rhs = Complex64::from_polar(1.0, -PI * nu) * j - bessel_j(-nu, z)?;
            r.rel_c("specfun", format!("reflection nu={nu} x={x}"), lhs, rhs, 1e-10);
            let rec = bessel_j(nu - 1.0, z)? + bessel_j(nu + 1.0, z)?;
            let want = j * (2.0 * nu / x);
            let scale = rec.norm().max(j.norm()).max(1e-300);
            r.abs("specfun", format!("recurrence nu={nu} x={x}"), (rec - want).norm() / scale, 0.0, 1e-10);
            let ji = bessel_j(nu, Complex64::new(0.0, x))?;
            let (is, _) = bessel_i_scaled(nu, x)?;
            let want = Complex64::from_polar(is * x.exp(), 0.5 * PI * nu);
            r.rel_c("specfun", format!("imaginary argument nu={nu} x={x}"), ji, want, 1e-10);
        }
    }
    Ok(())
}

fn unit_kin() -> Result<Kinematics> {
    Kinematics::new(UnitSystem::NATURAL, 2f64.sqrt(), 1.0, None)
}

fn bare(r: &mut Report) -> Result<()> {
    let kin = unit_kin()?;
    for &a in &[0.25, 0.5, 0.75, -0.25, -0.5, -0.75] {
        let c = Coupling::new(a)?;
        let (l, ch) = anomalous_channel(&c).expect("non-integer coupling");
        let (lim, _) = matching_limit(l, ch, c, &kin)?;
        let want = anomalous_limit(&c).expect("non-integer coupling");
        r.abs("bare", format!("anomalous limit alpha={a}"), (lim - want).norm(), 0.0, 1e-3);
    }
    let c = Coupling::new(0.3)?;
    for l in [-2i64, -1, 1, 2] {
        let a = matching_at_kr0(l, Channel::One, c, &kin, 1e-3)?.norm();
        let b = matching_at_kr0(l, Channel::One, c, &kin, 1e-4)?.norm();
        let slope = (a / b).log10();
        // 2|l - alpha| below alpha; the exact ratio gives 2(|l - alpha| + 1) above
        let nu = (l as f64 - 0.3).abs();
        let expected = if l < 0 { 2.0 * nu } else { 2.0 * (nu + 1.0) };
        r.rel("bare", format!("slope l={l}"), slope, expected, 0.01);
    }
    Ok(())
}

fn ode(r: &mut Report) -> Result<()> {
    let kin = unit_kin()?;
    for &a in &[0.3, -0.3, 0.75] {
        let c = Coupling::new(a)?;
        for l in -1..=1 {
            for ch in [Channel::One, Channel::Two] {
                let tube = TubeConfig::new(1e-2 / kin.k, c)?;
                let exact = matching_coefficient(l, ch, &tube, &kin)?.value;
                let ode = ode_matching_coefficient(l, ch, &tube, None, &kin)?;
                r.rel_c("ode", format!("alpha={a} l={l} ch={}", ch.index()), ode, exact, 1e-6);
            }
        }
    }
    Ok(())
}

fn shielded(r: &mut Report) -> Result<()> {
    let c = Coupling::new(0.3)?;
    let at = |x: f64| -> Result<f64> {
        let (kin, bar) = kinematics_for_ratios(UnitSystem::NATURAL, 1.0, 1.0, x, 50.0)?;
        Ok(shielded_matching(0, Channel::One, &c, &bar, &kin)?.value.norm())
    };
    let slope = (at(1e-2)? / at(1e-4)?).log10() / 2.0;
    r.rel("shielded", "slope l=0 (anomalous channel)", slope, 0.6, 0.02);
    let kin = unit_kin()?;
    let bare = matching_at_kr0(0, Channel::One, c, &kin, 1e-6)?.norm();
    r.abs("shielded", "shielded/bare l=0 at kR0=1e-6", at(1e-6)? / bare, 0.0, 1e-2);
    Ok(())
}

fn scattering(r: &mut Report) -> Result<()> {
    let kin = unit_kin()?;
    let zero = Coupling::new(0.0)?;
    let mut worst: f64 = 0.0;
    for &x in &[1.0, 10.0, 50.0] {
        for &t in &[0.3, 2.0, -2.9] {
            let v = ab_wavefunction(&zero, &kin, x, t, 1e-15)?;
            worst = worst.max((v - Complex64::from_polar(1.0, -x * t.cos())).norm());
        }
    }
    r.abs("scattering", "plane wave at alpha=0", worst, 0.0, 1e-10);
    let amps = [
        SpinorAmplitudes::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))?,
        SpinorAmplitudes::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))?,
    ];
    for kind in [StateKind::Shielded, StateKind::Bare] {
        for &x in &[100.0, 400.0] {
        let mut worst: f64 = 0.0;
        for &a in &[0.25, 0.5, 0.75] {
            let c = Coupling::new(a)?;
            for &t in &[PI / 4.0, -PI / 2.0, 3.0 * PI / 4.0] {
                for p in &amps {
                    let ex = dirac_scattering_state(kind, p, &c, &kin, x, t)?;
                    let asy = asymptotic_state(kind, p, &c, &kin, x, t)?;
                    for i in 0..4 {
                        if ex.chi[i].norm() > 0.0 {
                            worst = worst.max((asy.chi[i] - ex.chi[i]).norm() / ex.chi[i].norm());
                        }
                    }
                }
            }
        }
        r.abs("scattering", format!("{kind:?} asymptotic form at kr={x}"), worst, 0.0, 0.01);
        }
    }
    Ok(())
}

fn greens(r: &mut Report) -> Result<()> {
    let c = Coupling::new(0.3)?;
    let s3 = 3f64.sqrt();
    let p = GreensPoint::new(s3, s3, 0.4, 0.1, 1.0)?;
    let o = greens_diff_integral_oracle(&c, 1.0, &p, OracleOptions::default())?;
    r.rel_c("greens", "integral oracle at Mrr'/t=3", o.value, greens_diff_closed(&c, 1.0, &p)?, 5e-3);
    let p = GreensPoint::new(10.0, 10.0, 0.0, 0.0, 1.0)?;
    let ratio = greens_diff_asymptotic(&c, 1.0, &p)?.norm() / greens_diff_closed(&c, 1.0, &p)?.norm();
    r.rel("greens", "large-argument form at Mrr'/t=100", ratio, 1.0, 0.02);
    let mut worst: f64 = 0.0;
    for &t in &[0.05, 0.7, 4.0] {
        let p = GreensPoint::new(0.8, 2.5, 0.3, -0.6, t)?;
        let h = greens_diff_closed(&c, 1.0, &p)?;
        worst = worst.max((greens_diff_bracket(&c, 1.0, &p)? - h).norm() / h.norm());
    }
    r.abs("greens", "bracket form equals Hankel form", worst, 0.0, 1e-12);
    Ok(())
}

fn packet(r: &mut Report) -> Result<()> {
    let c = Coupling::new(0.5)?;
    let norm = packet_norm(&PacketConfig::new(1.0, 20.0, 0.0, 50.0)?, &c)?;
    r.abs("packet", "initial packet norm", norm, 1.0, 1e-3);
    let head = PacketConfig::desk(0.0)?;
    let t = 2.0 * head.rho0 / head.k;
    let c0 = delta_closed(&head, &c, 1.0, head.rho0, 0.0, t)?.norm();
    let q0 = delta_quadrature(&head, &c, 1.0, head.rho0, 0.0, t)?.value.norm();
    for &s in &[0.5, 1.0, 2.0, 3.0] {
        let cfg = PacketConfig::from_impact_parameter(head.delta, head.rho0, s * head.delta, head.k)?;
        let expected = -0.5 * s * s;
        let cd = delta_closed(&cfg, &c, 1.0, cfg.rho0, 0.0, t)?.norm();
        r.rel("packet", format!("closed exponent d/delta={s}"), (cd / c0).ln(), expected, 0.05);
        let qd = delta_quadrature(&cfg, &c, 1.0, cfg.rho0, 0.0, t)?.value.norm();
        r.rel("packet", format!("quadrature exponent d/delta={s}"), (qd / q0).ln(), expected, 0.05);
    }
    Ok(())
}

fn nonrel(r: &mut Report) -> Result<()> {
    let c = Coupling::new(0.5)?;
    let amps = SpinorAmplitudes::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0))?;
    let column = |ratio: f64| -> Result<f64> {
        let kin = Kinematics::from_wavenumber(UnitSystem::NATURAL, ratio, 1.0, None)?;
        let v = shielded_correction(&amps, &c, &kin, 3.0 / ratio, 1.2)?;
        Ok(v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
    };
    let slope = (column(1e-1)? / column(1e-3)?).log10() / 2.0;
    r.abs("nonrel", "correction column slope in hbar k/Mc", slope, 1.0, 0.02);
    Ok(())
}
