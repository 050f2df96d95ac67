//! Plane-wave scattering by bare and shielded strings: the spinless
//! partial-wave sum, the four-spinor states built on it, their large-kr forms
//! and the angular amplitude.
//!
//! The incident wave is e^{-ikr cos(theta) + i alpha theta}, moving toward
//! theta = pi; the forward direction is theta = +-pi, where the closed
//! asymptotic form has its 1/cos(theta/2) pole. The time factor e^{-iEt/hbar}
//! is dropped throughout.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{Coupling, Kinematics, SpinorAmplitudes};
use crate::quadrature::{self, QuadOptions};
use crate::specfun::{self, bessel_j, bessel_j_sequence, MAX_ORDER};

/// Half-width of the excluded cone around the forward direction.
pub const DEFAULT_FORWARD_CONE: f64 = 0.1;
/// Smallest kr accepted by the asymptotic forms.
pub const ASYMPTOTIC_MIN_KR: f64 = 50.0;
/// Tail tolerance used when a state is assembled without an explicit one.
pub const DEFAULT_SUM_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Bare,
    Shielded,
}

impl std::str::FromStr for StateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bare" => Ok(StateKind::Bare),
            "shielded" => Ok(StateKind::Shielded),
            _ => Err(Error::param("kind", format!("expected bare or shielded, got {s}"))),
        }
    }
}

/// Four spinor components at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveFieldSample {
    pub r: f64,
    pub theta: f64,
    #[serde(serialize_with = "crate::serialize_complex_array")]
    pub chi: [Complex64; 4],
}

/// Truncated partial-wave sum. `l_max` counts terms on each side of the
/// split l = ceil(alpha); `tail` bounds the omitted terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialWaveSum {
    #[serde(serialize_with = "crate::serialize_complex")]
    pub value: Complex64,
    pub l_max: usize,
    pub terms: usize,
    pub tail: f64,
}

/// Starting truncation: ceil(kr) + 12 + ceil(4 (kr)^{1/3}).
pub fn initial_l_max(kr: f64) -> usize {
    (kr.ceil() + 12.0 + (4.0 * kr.cbrt()).ceil()) as usize
}

/// sum_l e^{-i pi |l-alpha|/2} J_{|l-alpha|}(kr) e^{il theta}.
///
/// Orders split at l = ceil(alpha): l = ceil(alpha) + j has order nu0 + j and
/// l = ceil(alpha) - 1 - j has order 1 - nu0 + j, with nu0 = ceil(alpha) - alpha.
/// Each side is one downward-recurrence sequence. The truncation doubles
/// until the first two omitted terms on both sides sum below `tol`.
pub fn ab_partial_wave_sum(coupling: &Coupling, kin: &Kinematics, r: f64, theta: f64, tol: f64) -> Result<PartialWaveSum> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::param("r", format!("must be finite and >= 0, got {r}")));
    }
    if !(tol > 0.0) {
        return Err(Error::param("tol", "must be positive"));
    }
    if !theta.is_finite() {
        return Err(Error::param("theta", "must be finite"));
    }
    let alpha = coupling.alpha;
    let split = alpha.ceil();
    let nu0 = split - alpha;
    let x = kin.k * r;
    if x == 0.0 {
        // only an order-zero term survives, present for integer alpha
        let value = if nu0 == 0.0 {
            Complex64::from_polar(1.0, split * theta)
        } else {
            Complex64::new(0.0, 0.0)
        };
        return Ok(PartialWaveSum { value, l_max: 0, terms: 1, tail: 0.0 });
    }
    let mut l_max = initial_l_max(x);
    loop {
        let top = (1.0 - nu0) + (l_max + 1) as f64;
        if top > MAX_ORDER {
            let tail = tail_at(nu0, l_max.min(MAX_ORDER as usize - 2), x)?;
            return Err(Error::Truncation { tail, tol, l_max });
        }
        let up = bessel_j_sequence(nu0, l_max + 2, x)?;
        let down = bessel_j_sequence(1.0 - nu0, l_max + 2, x)?;
        let tail = up[l_max].abs() + up[l_max + 1].abs() + down[l_max].abs() + down[l_max + 1].abs();
        if tail <= tol {
            let mut value = Complex64::new(0.0, 0.0);
            for j in 0..l_max {
                let nu = nu0 + j as f64;
                let l = split + j as f64;
                value += Complex64::from_polar(up[j], -0.5 * PI * nu + l * theta);
                let nu = 1.0 - nu0 + j as f64;
                let l = split - 1.0 - j as f64;
                value += Complex64::from_polar(down[j], -0.5 * PI * nu + l * theta);
            }
            return Ok(PartialWaveSum {
                value,
                l_max,
                terms: 2 * l_max,
                tail,
            });
        }
        l_max *= 2;
    }
}

fn tail_at(nu0: f64, l_max: usize, x: f64) -> Result<f64> {
    let a = bessel_j(nu0 + l_max as f64, Complex64::new(x, 0.0))?.norm();
    let b = bessel_j(1.0 - nu0 + l_max as f64, Complex64::new(x, 0.0))?.norm();
    Ok(a + b)
}

/// Spinless scattering state of the shielded string.
pub fn ab_wavefunction(coupling: &Coupling, kin: &Kinematics, r: f64, theta: f64, tol: f64) -> Result<Complex64> {
    Ok(ab_partial_wave_sum(coupling, kin, r, theta, tol)?.value)
}

fn require_unit_interval(coupling: &Coupling) -> Result<()> {
    if !(coupling.alpha > 0.0 && coupling.alpha < 1.0) {
        return Err(Error::CouplingRange(coupling.alpha, "(0, 1)"));
    }
    Ok(())
}

/// Spinless bare-string state: the l = 0 term e^{-i pi alpha/2} J_alpha is
/// replaced by e^{i pi alpha/2} J_{-alpha}. Requires 0 < alpha < 1.
pub fn bare_wavefunction_scalar(coupling: &Coupling, kin: &Kinematics, r: f64, theta: f64, tol: f64) -> Result<Complex64> {
    require_unit_interval(coupling)?;
    if r == 0.0 {
        return Err(Error::DivergentAtOrigin("bare-string l = 0 term J_{-alpha}"));
    }
    let a = coupling.alpha;
    let z = Complex64::new(kin.k * r, 0.0);
    let sh = ab_wavefunction(coupling, kin, r, theta, tol)?;
    Ok(sh + Complex64::from_polar(1.0, 0.5 * PI * a) * bessel_j(-a, z)?
        - Complex64::from_polar(1.0, -0.5 * PI * a) * bessel_j(a, z)?)
}

/// hbar c k / (E + Mc^2).
pub fn lower_ratio(kin: &Kinematics) -> f64 {
    kin.hbar_c() * kin.k / (kin.energy + kin.rest_energy())
}

/// Reduced coupling alpha - [alpha] in [0, 1) and the gauge phase e^{i[alpha] theta}.
fn gauge_split(coupling: &Coupling, theta: f64) -> (f64, Complex64) {
    (coupling.frac, Complex64::from_polar(1.0, coupling.int_part as f64 * theta))
}

fn check_kind(kind: StateKind, coupling: &Coupling) -> Result<()> {
    if kind == StateKind::Bare && coupling.alpha < 0.0 {
        return Err(Error::CouplingRange(coupling.alpha, "[0, inf) for the bare string"));
    }
    Ok(())
}

/// Hankel column carried by the lower components of the shielded state,
/// divergent at r = 0 and proportional to hbar c k/(E + Mc^2).
pub fn shielded_correction(amps: &SpinorAmplitudes, coupling: &Coupling, kin: &Kinematics, r: f64, theta: f64) -> Result<[Complex64; 4]> {
    if !(r > 0.0) {
        return Err(Error::param("r", format!("must be positive, got {r}")));
    }
    let (a, gauge) = gauge_split(coupling, theta);
    let zero = Complex64::new(0.0, 0.0);
    if a == 0.0 {
        return Ok([zero; 4]);
    }
    let s = (PI * a).sin();
    let c = lower_ratio(kin);
    let z = Complex64::new(kin.k * r, 0.0);
    let ha = specfun::hankel1(a, z)?;
    let h1a = specfun::hankel1(1.0 - a, z)?;
    let i = Complex64::i();
    let comp3 = -i * c * amps.a2 * Complex64::from_polar(s, 0.5 * PI * a) * ha;
    let comp4 = c * amps.a1 * Complex64::from_polar(s, -0.5 * PI * a) * h1a * Complex64::from_polar(1.0, theta);
    Ok([zero, zero, comp3 * gauge, comp4 * gauge])
}

/// Extra column of the bare state relative to the shielded one; it is
/// proportional to a1 and its first entry survives the limit hbar k/Mc -> 0.
pub fn bare_extra_correction(amps: &SpinorAmplitudes, coupling: &Coupling, kin: &Kinematics, r: f64, theta: f64) -> Result<[Complex64; 4]> {
    check_kind(StateKind::Bare, coupling)?;
    if !(r > 0.0) {
        return Err(Error::param("r", format!("must be positive, got {r}")));
    }
    let (a, gauge) = gauge_split(coupling, theta);
    let zero = Complex64::new(0.0, 0.0);
    if a == 0.0 {
        return Ok([zero; 4]);
    }
    let s = (PI * a).sin();
    let c = lower_ratio(kin);
    let z = Complex64::new(kin.k * r, 0.0);
    let w = Complex64::from_polar(s, 0.5 * PI * a);
    let comp1 = Complex64::i() * amps.a1 * w * specfun::hankel1(a, z)?;
    let comp4 = c * amps.a1 * w * specfun::hankel1(a - 1.0, z)? * Complex64::from_polar(1.0, theta);
    Ok([comp1 * gauge, zero, zero, comp4 * gauge])
}

/// Dirac scattering state at (r, theta): the spinless sum on the spinor
/// (a1, a2, -c a2, -c a1), c = hbar c k/(E + Mc^2), plus the Hankel
/// correction columns. Non-integer alpha outside (0, 1) is reduced by the
/// gauge shift alpha -> alpha - [alpha] with the phase e^{i[alpha] theta};
/// the bare kind needs alpha >= 0.
pub fn dirac_scattering_state(
    kind: StateKind,
    amps: &SpinorAmplitudes,
    coupling: &Coupling,
    kin: &Kinematics,
    r: f64,
    theta: f64,
) -> Result<WaveFieldSample> {
    check_kind(kind, coupling)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::param("r", format!("must be positive, got {r}")));
    }
    let psi = ab_wavefunction(coupling, kin, r, theta, DEFAULT_SUM_TOL)?;
    let c = lower_ratio(kin);
    let mut chi = [amps.a1 * psi, amps.a2 * psi, -c * amps.a2 * psi, -c * amps.a1 * psi];
    let col = shielded_correction(amps, coupling, kin, r, theta)?;
    for (v, d) in chi.iter_mut().zip(col) {
        *v += d;
    }
    if kind == StateKind::Bare {
        let extra = bare_extra_correction(amps, coupling, kin, r, theta)?;
        for (v, d) in chi.iter_mut().zip(extra) {
            *v += d;
        }
    }
    Ok(WaveFieldSample { r, theta, chi })
}

fn check_asymptotic(kin: &Kinematics, r: f64, theta: f64, cut: f64) -> Result<()> {
    let x = kin.k * r;
    if !(x >= ASYMPTOTIC_MIN_KR) {
        return Err(Error::Regime(format!("asymptotic form needs kr >= {ASYMPTOTIC_MIN_KR}, got {x}")));
    }
    if !(theta.abs() < PI - cut) {
        return Err(Error::ForwardCone { theta, cut });
    }
    Ok(())
}

/// Large-kr form with the default forward cone.
pub fn asymptotic_state(
    kind: StateKind,
    amps: &SpinorAmplitudes,
    coupling: &Coupling,
    kin: &Kinematics,
    r: f64,
    theta: f64,
) -> Result<WaveFieldSample> {
    asymptotic_state_with_cut(kind, amps, coupling, kin, r, theta, DEFAULT_FORWARD_CONE)
}

/// Incident spinor times e^{-ikr cos(theta) + i alpha theta} plus the
/// scattered spinor times sin(pi alpha)/cos(theta/2) e^{ikr + i pi/4}/(2 pi kr)^{1/2}.
/// Scattered spinors: shielded -(a1 e^{i theta/2}, a2 e^{i theta/2},
/// c a2 e^{-i theta/2}, c a1 e^{3i theta/2}); bare +(a1 e^{-i theta/2},
/// -a2 e^{i theta/2}, -c a2 e^{-i theta/2}, c a1 e^{i theta/2}).
pub fn asymptotic_state_with_cut(
    kind: StateKind,
    amps: &SpinorAmplitudes,
    coupling: &Coupling,
    kin: &Kinematics,
    r: f64,
    theta: f64,
    cut: f64,
) -> Result<WaveFieldSample> {
    check_kind(kind, coupling)?;
    check_asymptotic(kin, r, theta, cut)?;
    let (a, gauge) = gauge_split(coupling, theta);
    let x = kin.k * r;
    let c = lower_ratio(kin);
    let (a1, a2) = (amps.a1, amps.a2);
    let incident = Complex64::from_polar(1.0, -x * theta.cos() + a * theta);
    let scat = Complex64::from_polar((PI * a).sin() / (0.5 * theta).cos() / (2.0 * PI * x).sqrt(), x + 0.25 * PI);
    let ph = |f: f64| Complex64::from_polar(1.0, f * theta);
    let spinor = match kind {
        StateKind::Shielded => [-a1 * ph(0.5), -a2 * ph(0.5), -c * a2 * ph(-0.5), -c * a1 * ph(1.5)],
        StateKind::Bare => [a1 * ph(-0.5), -a2 * ph(0.5), -c * a2 * ph(-0.5), c * a1 * ph(0.5)],
    };
    let inc = [a1, a2, -c * a2, -c * a1];
    let mut chi = [Complex64::new(0.0, 0.0); 4];
    for i in 0..4 {
        chi[i] = (inc[i] * incident + spinor[i] * scat) * gauge;
    }
    Ok(WaveFieldSample { r, theta, chi })
}

/// f(theta) with e^{ikr}/r^{1/2} stripped from the scattered spinless wave:
/// -e^{i[alpha] theta} sin(pi(alpha - [alpha])) e^{i theta/2 + i pi/4} / (cos(theta/2) (2 pi k)^{1/2}).
pub fn scattering_amplitude(coupling: &Coupling, kin: &Kinematics, theta: f64) -> Result<Complex64> {
    if !(theta.abs() < PI) {
        return Err(Error::ForwardCone { theta, cut: 0.0 });
    }
    if !(kin.k > 0.0) {
        return Err(Error::param("k", "must be positive"));
    }
    let (a, gauge) = gauge_split(coupling, theta);
    let m = -(PI * a).sin() / ((0.5 * theta).cos() * (2.0 * PI * kin.k).sqrt());
    Ok(gauge * Complex64::from_polar(m, 0.5 * theta + 0.25 * PI))
}

/// |f|^2 = sin^2(pi alpha) / (2 pi k cos^2(theta/2)).
pub fn differential_cross_section(coupling: &Coupling, kin: &Kinematics, theta: f64) -> Result<f64> {
    Ok(scattering_amplitude(coupling, kin, theta)?.norm_sqr())
}

/// Integral of |f|^2 over |theta| < pi - cut by adaptive quadrature.
pub fn integrated_cross_section(coupling: &Coupling, kin: &Kinematics, cut: f64) -> Result<f64> {
    if !(cut > 0.0 && cut < PI) {
        return Err(Error::param("cut", format!("must lie in (0, pi), got {cut}")));
    }
    let lim = PI - cut;
    let probe = differential_cross_section(coupling, kin, 0.0)?;
    let f = |t: f64| Complex64::new(differential_cross_section(coupling, kin, t).unwrap_or(f64::NAN), 0.0);
    let opts = QuadOptions {
        abs_tol: 1e-14 * probe.max(1e-300),
        rel_tol: 1e-12,
        ..QuadOptions::default()
    };
    let r = quadrature::integrate(f, -lim, lim, opts)?;
    Ok(r.value.re)
}
