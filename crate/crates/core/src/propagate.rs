//! Non-relativistic propagation: the difference between the bare-string and
//! shielded-string Green's functions, and the resulting difference Delta
//! between the two scattered wave packets.
//!
//! Units have hbar = 1; `mass` is the particle mass. The two Green's
//! functions differ only in the partial wave l = [alpha], so every quantity
//! here carries the factor sin(pi frac) and vanishes for integer alpha.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::extrapolate::richardson_halving;
use crate::model::Coupling;
use crate::quadrature::{self, QuadOptions};
use crate::specfun::{bessel_j, hankel1};

/// a >> b is enforced as a >= REGIME_MARGIN * b.
pub const REGIME_MARGIN: f64 = 5.0;
/// Largest |theta0| accepted as a small angular offset.
pub const MAX_THETA0: f64 = 0.5;
/// Smallest M r r'/t accepted by the large-argument form.
pub const ASYMPTOTIC_MIN_ARG: f64 = 10.0;
/// Packet support used by the quadrature, in widths.
pub const SUPPORT_WIDTHS: f64 = 6.0;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Source and field point of the propagator and the elapsed time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreensPoint {
    pub r: f64,
    pub r_prime: f64,
    pub theta: f64,
    pub theta_prime: f64,
    pub t: f64,
}

impl GreensPoint {
    pub fn new(r: f64, r_prime: f64, theta: f64, theta_prime: f64, t: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::param("r", format!("must be positive, got {r}")));
        }
        if !(r_prime > 0.0 && r_prime.is_finite()) {
            return Err(Error::param("r_prime", format!("must be positive, got {r_prime}")));
        }
        if !(theta.is_finite() && theta_prime.is_finite()) {
            return Err(Error::param("theta", "angles must be finite"));
        }
        if t == 0.0 {
            return Err(Error::SingularArgument("propagator at t = 0"));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::param("t", format!("must be positive, got {t}")));
        }
        Ok(GreensPoint {
            r,
            r_prime,
            theta,
            theta_prime,
            t,
        })
    }

    /// Bessel argument M r r'/t.
    pub fn argument(&self, mass: f64) -> f64 {
        mass * self.r * self.r_prime / self.t
    }
}

/// One evaluated kernel value; vanishes for integer alpha.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreensDiffSample {
    #[serde(flatten)]
    pub point: GreensPoint,
    #[serde(serialize_with = "crate::serialize_complex")]
    pub value: Complex64,
}

fn check_mass(mass: f64) -> Result<()> {
    if mass > 0.0 && mass.is_finite() {
        Ok(())
    } else {
        Err(Error::param("mass", format!("must be positive, got {mass}")))
    }
}

/// exp(iM(r^2 + r'^2)/2t + i[alpha](theta - theta')).
fn free_phase(coupling: &Coupling, mass: f64, p: &GreensPoint) -> Complex64 {
    let ph = mass * (p.r * p.r + p.r_prime * p.r_prime) / (2.0 * p.t)
        + coupling.int_part as f64 * (p.theta - p.theta_prime);
    Complex64::from_polar(1.0, ph)
}

/// (M/2 pi t) sin(pi frac) e^{i pi frac/2} H^(1)_frac(M r r'/t) times the
/// free phase. Exactly zero for integer alpha.
pub fn greens_diff_closed(coupling: &Coupling, mass: f64, p: &GreensPoint) -> Result<Complex64> {
    check_mass(mass)?;
    if coupling.is_integer() {
        return Ok(ZERO);
    }
    let f = coupling.frac;
    let h = hankel1(f, Complex64::new(p.argument(mass), 0.0))?;
    let pre = mass / (2.0 * PI * p.t) * (PI * f).sin();
    Ok(Complex64::from_polar(pre, 0.5 * PI * f) * h * free_phase(coupling, mass, p))
}

/// The same difference in Bessel-bracket form:
/// -(iM/2 pi t)[e^{i pi frac/2} J_{-frac} - e^{-i pi frac/2} J_frac] times
/// the free phase.
pub fn greens_diff_bracket(coupling: &Coupling, mass: f64, p: &GreensPoint) -> Result<Complex64> {
    check_mass(mass)?;
    if coupling.is_integer() {
        return Ok(ZERO);
    }
    let f = coupling.frac;
    let z = Complex64::new(p.argument(mass), 0.0);
    let bracket = Complex64::from_polar(1.0, 0.5 * PI * f) * bessel_j(-f, z)?
        - Complex64::from_polar(1.0, -0.5 * PI * f) * bessel_j(f, z)?;
    let pre = Complex64::new(0.0, -mass / (2.0 * PI * p.t));
    Ok(pre * bracket * free_phase(coupling, mass, p))
}

/// Large-argument form, (M/2 pi^3 t r r')^{1/2} sin(pi frac)
/// exp[iM(r + r')^2/2t + i[alpha](theta - theta') - i pi/4].
/// Exact for frac = 1/2. Needs M r r'/t >= ASYMPTOTIC_MIN_ARG.
pub fn greens_diff_asymptotic(coupling: &Coupling, mass: f64, p: &GreensPoint) -> Result<Complex64> {
    check_mass(mass)?;
    let x = p.argument(mass);
    if x < ASYMPTOTIC_MIN_ARG {
        return Err(Error::Regime(format!(
            "M r r'/t = {x} below {ASYMPTOTIC_MIN_ARG} for the large-argument Green's function"
        )));
    }
    if coupling.is_integer() {
        return Ok(ZERO);
    }
    let amp = (mass / (2.0 * PI.powi(3) * p.t * p.r * p.r_prime)).sqrt() * (PI * coupling.frac).sin();
    let ph = mass * (p.r + p.r_prime).powi(2) / (2.0 * p.t)
        + coupling.int_part as f64 * (p.theta - p.theta_prime)
        - 0.25 * PI;
    Ok(Complex64::from_polar(amp, ph))
}

/// Settings of the regularized k-integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Largest regulator; the others are eps/2, eps/4, ...
    pub epsilon: f64,
    pub levels: usize,
    /// Largest accepted spread of the last two extrapolants, relative.
    pub spread_tol: f64,
    pub quad: QuadOptions,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            epsilon: 0.02,
            levels: 3,
            spread_tol: 5e-3,
            quad: QuadOptions {
                abs_tol: 1e-14,
                rel_tol: 1e-11,
                max_intervals: 50_000,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleEstimate {
    #[serde(serialize_with = "crate::serialize_complex")]
    pub value: Complex64,
    /// Distance to the extrapolant built from one level fewer.
    pub spread: f64,
    /// Regularized integrals at eps, eps/2, ...
    #[serde(skip)]
    pub levels: Vec<Complex64>,
}

/// (1/2 pi) int_0^inf k dk [J_{-frac}(kr)J_{-frac}(kr') - J_frac(kr)J_frac(kr')]
/// e^{-ik^2 t/2M - eps k^2} at a single eps, times e^{i[alpha](theta - theta')}.
pub fn greens_diff_regularized(
    coupling: &Coupling,
    mass: f64,
    p: &GreensPoint,
    eps: f64,
    quad: QuadOptions,
) -> Result<Complex64> {
    check_mass(mass)?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::param("epsilon", format!("must be positive, got {eps}")));
    }
    if coupling.is_integer() {
        return Ok(ZERO);
    }
    let f = coupling.frac;
    // e^{-eps k^2} < 1e-18 beyond k_max
    let k_max = (42.0 / eps).sqrt();
    let integrand = |k: f64| -> Complex64 {
        if k == 0.0 {
            return ZERO;
        }
        let a = Complex64::new(k * p.r, 0.0);
        let b = Complex64::new(k * p.r_prime, 0.0);
        let term = match (bessel_j(-f, a), bessel_j(-f, b), bessel_j(f, a), bessel_j(f, b)) {
            (Ok(ja), Ok(jb), Ok(ka), Ok(kb)) => ja * jb - ka * kb,
            _ => return Complex64::new(f64::NAN, 0.0),
        };
        let damp = Complex64::new(-eps * k * k, -k * k * p.t / (2.0 * mass)).exp();
        term * damp * k
    };
    // panels of roughly one period of the Gaussian-chirp and Bessel phases
    let rate = p.r + p.r_prime;
    let n = ((k_max * k_max * p.t / (2.0 * mass) + k_max * rate) / (2.0 * PI)).ceil().max(1.0) as usize;
    let n = n.min(4000);
    let breaks: Vec<f64> = (0..=n).map(|i| k_max * (i as f64 / n as f64).sqrt()).collect();
    let res = quadrature::integrate_panels(integrand, &breaks, quad)?;
    if !res.value.re.is_finite() || !res.value.im.is_finite() {
        return Err(Error::NonConvergence {
            what: "regularized Green's function integrand",
            iterations: res.intervals,
        });
    }
    let ang = Complex64::from_polar(1.0, coupling.int_part as f64 * (p.theta - p.theta_prime));
    Ok(res.value / (2.0 * PI) * ang)
}

/// eps -> 0 limit of the regularized k-integral by Richardson extrapolation
/// over eps, eps/2, eps/4, ... The regularized value is analytic in eps, so
/// integer exponents are eliminated.
pub fn greens_diff_integral_oracle(
    coupling: &Coupling,
    mass: f64,
    p: &GreensPoint,
    opts: OracleOptions,
) -> Result<OracleEstimate> {
    if opts.levels < 2 {
        return Err(Error::param("levels", "need at least two regulator values"));
    }
    let levels = (0..opts.levels)
        .map(|j| greens_diff_regularized(coupling, mass, p, opts.epsilon * 0.5f64.powi(j as i32), opts.quad))
        .collect::<Result<Vec<_>>>()?;
    let (value, _) = richardson_halving(&levels);
    // spread against the extrapolant that uses one level fewer
    let (coarser, _) = richardson_halving(&levels[1..]);
    let spread = (value - coarser).norm();
    if spread > opts.spread_tol * value.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::Extrapolation {
            spread,
            tol: opts.spread_tol * value.norm(),
        });
    }
    Ok(OracleEstimate { value, spread, levels })
}

/// Gaussian packet of width delta, centred at (rho0, theta0) and moving in
/// the -x direction with wavenumber k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacketConfig {
    pub delta: f64,
    pub rho0: f64,
    pub theta0: f64,
    pub k: f64,
}

impl PacketConfig {
    /// Requires k rho0 >> 1, delta/rho0 << 1 and |theta0| <= MAX_THETA0.
    pub fn new(delta: f64, rho0: f64, theta0: f64, k: f64) -> Result<Self> {
        for (name, v) in [("delta", delta), ("rho0", rho0), ("k", k)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        if !(theta0.abs() <= MAX_THETA0) {
            return Err(Error::param("theta0", format!("|theta0| must be <= {MAX_THETA0}, got {theta0}")));
        }
        if k * rho0 < REGIME_MARGIN {
            return Err(Error::Regime(format!("k rho0 = {} is not >> 1", k * rho0)));
        }
        if REGIME_MARGIN * delta > rho0 {
            return Err(Error::Regime(format!("delta/rho0 = {} is not << 1", delta / rho0)));
        }
        Ok(PacketConfig { delta, rho0, theta0, k })
    }

    pub fn from_impact_parameter(delta: f64, rho0: f64, d: f64, k: f64) -> Result<Self> {
        Self::new(delta, rho0, d / rho0, k)
    }

    /// k = 50, rho0 = 20, delta = 2.
    pub fn desk(theta0: f64) -> Result<Self> {
        Self::new(2.0, 20.0, theta0, 50.0)
    }

    /// d = rho0 theta0.
    pub fn impact_parameter(&self) -> f64 {
        self.rho0 * self.theta0
    }

    pub fn with_theta0(&self, theta0: f64) -> Result<Self> {
        Self::new(self.delta, self.rho0, theta0, self.k)
    }

    /// Time at which the moving envelope of Delta peaks at radius r.
    pub fn transit_time(&self, mass: f64, r: f64) -> f64 {
        (r + self.rho0 - 0.5 * self.rho0 * self.theta0 * self.theta0) * mass / self.k
    }

    /// Width in time of that envelope, delta M / k.
    pub fn transit_width(&self, mass: f64) -> f64 {
        self.delta * mass / self.k
    }

    /// Which of k r >> 1, rho0 << k delta^2, r << k delta^2 fail at radius r.
    pub fn regime_violations(&self, r: f64) -> Vec<String> {
        let kd2 = self.k * self.delta * self.delta;
        let mut out = Vec::new();
        if self.k * r < REGIME_MARGIN {
            out.push(format!("k r = {} is not >> 1", self.k * r));
        }
        if REGIME_MARGIN * self.rho0 > kd2 {
            out.push(format!("rho0 = {} is not << k delta^2 = {kd2}", self.rho0));
        }
        if REGIME_MARGIN * r > kd2 {
            out.push(format!("r = {r} is not << k delta^2 = {kd2}"));
        }
        out
    }
}

/// (pi^{1/2} delta)^{-1} exp[i alpha theta' - ik r'(1 - theta'^2/2)
///   - (r'^2 + rho0^2 - 2 r' rho0 (1 - (theta' - theta0)^2/2))/2 delta^2].
///
/// The plane-wave phase is expanded about theta' = 0, and e^{i alpha theta'}
/// is only locally single-valued: the packet must stay clear of theta' = pi.
pub fn packet_initial(cfg: &PacketConfig, coupling: &Coupling, r_prime: f64, theta_prime: f64) -> Complex64 {
    let dt = theta_prime - cfg.theta0;
    let env = -(r_prime * r_prime + cfg.rho0 * cfg.rho0 - 2.0 * r_prime * cfg.rho0 * (1.0 - 0.5 * dt * dt))
        / (2.0 * cfg.delta * cfg.delta);
    let ph = coupling.alpha * theta_prime - cfg.k * r_prime * (1.0 - 0.5 * theta_prime * theta_prime);
    Complex64::new(env, ph).exp() / (PI.sqrt() * cfg.delta)
}

/// Radial and angular extent of the packet's SUPPORT_WIDTHS-sigma support.
fn support(cfg: &PacketConfig) -> (f64, f64) {
    let lo = (cfg.rho0 - SUPPORT_WIDTHS * cfg.delta).max(1e-3 * cfg.delta);
    (lo, cfg.rho0 + SUPPORT_WIDTHS * cfg.delta)
}

fn angular_window(cfg: &PacketConfig, r_prime: f64) -> (f64, f64) {
    let half = (SUPPORT_WIDTHS * cfg.delta / (r_prime * cfg.rho0).sqrt()).min(PI);
    ((cfg.theta0 - half).max(-PI), (cfg.theta0 + half).min(PI))
}

/// int |Psi|^2 r' dr' dtheta' over theta' in (-pi, pi) and the radial support.
pub fn packet_norm(cfg: &PacketConfig, coupling: &Coupling) -> Result<f64> {
    let opts = QuadOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-10,
        ..QuadOptions::default()
    };
    let res = quadrature::integrate_iterated(
        |rp| Complex64::new(rp, 0.0),
        |rp, tp| Complex64::new(packet_initial(cfg, coupling, rp, tp).norm_sqr(), 0.0),
        support(cfg),
        |rp| angular_window(cfg, rp),
        opts,
        opts,
    )?;
    Ok(res.value.re)
}

/// Probability of the packet within `width` of the cut at theta' = +-pi.
pub fn packet_mass_near_cut(cfg: &PacketConfig, coupling: &Coupling, width: f64) -> Result<f64> {
    let opts = QuadOptions {
        abs_tol: 1e-300,
        rel_tol: 1e-8,
        ..QuadOptions::default()
    };
    let (lo, hi) = support(cfg);
    let mut total = 0.0;
    for (a, b) in [(-PI, -PI + width), (PI - width, PI)] {
        let res = quadrature::integrate_2d(
            |rp, tp| Complex64::new(rp * packet_initial(cfg, coupling, rp, tp).norm_sqr(), 0.0),
            (lo, hi),
            (a, b),
            opts,
            opts,
        )?;
        total += res.value.re;
    }
    Ok(total)
}

/// Negative alpha is reduced to positive alpha by the reflection
/// (alpha, theta, theta0) -> (-alpha, -theta, -theta0).
fn mirrored(cfg: &PacketConfig, coupling: &Coupling, theta: f64) -> Result<(PacketConfig, Coupling, f64)> {
    if coupling.alpha >= 0.0 {
        return Ok((*cfg, *coupling, theta));
    }
    Ok((cfg.with_theta0(-cfg.theta0)?, Coupling::new(-coupling.alpha)?, -theta))
}

fn check_field_point(r: f64, t: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::param("r", format!("must be positive, got {r}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::param("t", format!("must be positive, got {t}")));
    }
    Ok(())
}

/// Stationary-phase form of Delta for k rho0, kr >> 1 and rho0, r << k delta^2:
///
/// e^{i pi/4}/(2^{1/2} pi delta) sin(pi frac) e^{ikr + i[alpha]theta}/(kr)^{1/2}
///   exp[-ik^2 t/2M - rho0^2 theta0^2/2 delta^2
///       - (r + rho0 - kt/M - rho0 theta0^2/2)^2/2 delta^2].
///
/// Written for alpha > 0; negative alpha goes through the reflection.
pub fn delta_closed(cfg: &PacketConfig, coupling: &Coupling, mass: f64, r: f64, theta: f64, t: f64) -> Result<Complex64> {
    check_mass(mass)?;
    check_field_point(r, t)?;
    let v = cfg.regime_violations(r);
    if !v.is_empty() {
        return Err(Error::Regime(v.join("; ")));
    }
    delta_closed_formula(cfg, coupling, mass, r, theta, t)
}

/// `delta_closed` without the regime check on r.
pub fn delta_closed_formula(
    cfg: &PacketConfig,
    coupling: &Coupling,
    mass: f64,
    r: f64,
    theta: f64,
    t: f64,
) -> Result<Complex64> {
    check_mass(mass)?;
    check_field_point(r, t)?;
    let (cfg, coupling, theta) = mirrored(cfg, coupling, theta)?;
    if coupling.is_integer() {
        return Ok(ZERO);
    }
    let k = cfg.k;
    let d2 = 2.0 * cfg.delta * cfg.delta;
    let shift = r + cfg.rho0 - k * t / mass - 0.5 * cfg.rho0 * cfg.theta0 * cfg.theta0;
    let log_amp = -(cfg.rho0 * cfg.theta0).powi(2) / d2 - shift * shift / d2;
    let amp = (PI * coupling.frac).sin() / (2f64.sqrt() * PI * cfg.delta * (k * r).sqrt()) * log_amp.exp();
    let ph = 0.25 * PI + k * r + coupling.int_part as f64 * theta - k * k * t / (2.0 * mass);
    Ok(Complex64::from_polar(amp, ph))
}

/// Delta as the integral of the exact kernel against the initial packet,
/// with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaEstimate {
    #[serde(serialize_with = "crate::serialize_complex")]
    pub value: Complex64,
    pub error: f64,
}

/// int (G^(b) - G) Psi r' dr' dtheta' over the packet's support, with the
/// closed Hankel kernel.
pub fn delta_quadrature(
    cfg: &PacketConfig,
    coupling: &Coupling,
    mass: f64,
    r: f64,
    theta: f64,
    t: f64,
) -> Result<DeltaEstimate> {
    delta_quadrature_scaled(cfg, coupling, mass, r, theta, t, 1.0)
}

/// As `delta_quadrature`, with the kernel multiplied by `scale`.
pub fn delta_quadrature_scaled(
    cfg: &PacketConfig,
    coupling: &Coupling,
    mass: f64,
    r: f64,
    theta: f64,
    t: f64,
    scale: f64,
) -> Result<DeltaEstimate> {
    check_mass(mass)?;
    check_field_point(r, t)?;
    let (cfg, coupling, theta) = mirrored(cfg, coupling, theta)?;
    if coupling.is_integer() {
        return Ok(DeltaEstimate { value: ZERO, error: 0.0 });
    }
    let f = coupling.frac;
    let int = coupling.int_part as f64;
    let pre = scale * mass / (2.0 * PI * t) * (PI * f).sin();
    // theta'-independent part of kernel times r'
    let radial = |rp: f64| -> Complex64 {
        let x = mass * r * rp / t;
        let h = match hankel1(f, Complex64::new(x, 0.0)) {
            Ok(h) => h,
            Err(_) => return Complex64::new(f64::NAN, 0.0),
        };
        let ph = 0.5 * PI * f + mass * (r * r + rp * rp) / (2.0 * t) + int * theta;
        Complex64::from_polar(pre * rp, ph) * h
    };
    let angular = |rp: f64, tp: f64| -> Complex64 {
        Complex64::from_polar(1.0, -int * tp) * packet_initial(&cfg, &coupling, rp, tp)
    };
    let opts = QuadOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-7,
        max_intervals: 20_000,
    };
    let inner = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-9,
        max_intervals: 20_000,
    };
    let res = quadrature::integrate_iterated(radial, angular, support(&cfg), |rp| angular_window(&cfg, rp), opts, inner)?;
    if !res.value.re.is_finite() || !res.value.im.is_finite() {
        return Err(Error::NonConvergence {
            what: "packet-difference kernel",
            iterations: res.intervals,
        });
    }
    Ok(DeltaEstimate {
        value: res.value,
        error: res.error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaMethod {
    Closed,
    Quadrature,
}

/// Time at which each row of a suppression scan is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanTime {
    /// The envelope peak of each row, `PacketConfig::transit_time`.
    Matched,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuppressionRow {
    pub d: f64,
    pub t: f64,
    pub delta_abs: f64,
    /// exp(-d^2/2 delta^2).
    pub gaussian: f64,
    /// gaussian / delta_abs; constant across rows when the law holds.
    pub ratio: f64,
}

/// |Delta| against impact parameter. Each d sets theta0 = d/rho0 on the
/// template; the field point is (r, theta).
#[allow(clippy::too_many_arguments)]
pub fn suppression_scan(
    template: &PacketConfig,
    coupling: &Coupling,
    mass: f64,
    r: f64,
    theta: f64,
    time: ScanTime,
    ds: &[f64],
    method: DeltaMethod,
) -> Result<Vec<SuppressionRow>> {
    ds.iter()
        .map(|&d| {
            let cfg = template.with_theta0(d / template.rho0)?;
            let t = match time {
                ScanTime::Matched => cfg.transit_time(mass, r),
                ScanTime::Fixed(t) => t,
            };
            let v = match method {
                DeltaMethod::Closed => delta_closed(&cfg, coupling, mass, r, theta, t)?,
                DeltaMethod::Quadrature => delta_quadrature(&cfg, coupling, mass, r, theta, t)?.value,
            };
            let gaussian = (-d * d / (2.0 * template.delta * template.delta)).exp();
            Ok(SuppressionRow {
                d,
                t,
                delta_abs: v.norm(),
                gaussian,
                ratio: gaussian / v.norm(),
            })
        })
        .collect()
}

/// Measured suppression exponent ln(|Delta(d)|/|Delta(0)|) divided by
/// -d^2/2 delta^2, for every row with d != 0. Needs a d = 0 row.
pub fn suppression_exponents(rows: &[SuppressionRow], delta: f64) -> Result<Vec<(f64, f64)>> {
    let base = rows
        .iter()
        .find(|r| r.d == 0.0)
        .ok_or_else(|| Error::param("d", "scan needs a d = 0 row"))?
        .delta_abs;
    Ok(rows
        .iter()
        .filter(|r| r.d != 0.0)
        .map(|r| {
            let expected = -r.d * r.d / (2.0 * delta * delta);
            (r.d, (r.delta_abs / base).ln() / expected)
        })
        .collect())
}

/// Gaussian fitted to |Delta| over time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitFit {
    pub center: f64,
    pub width: f64,
    pub peak: f64,
}

/// Least-squares parabola through ln(magnitude) against time, read as a
/// Gaussian peak * exp(-(t - center)^2/2 width^2).
pub fn fit_gaussian_transit(times: &[f64], magnitudes: &[f64]) -> Result<TransitFit> {
    if times.len() != magnitudes.len() || times.len() < 3 {
        return Err(Error::param("times", "need at least three (time, magnitude) pairs"));
    }
    if magnitudes.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::param("magnitudes", "must be positive"));
    }
    let n = times.len() as f64;
    let mean = times.iter().sum::<f64>() / n;
    let scale = times.iter().map(|t| (t - mean).abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    // normal equations in s = (t - mean)/scale
    let mut a = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for (&t, &m) in times.iter().zip(magnitudes) {
        let s = (t - mean) / scale;
        let basis = [1.0, s, s * s];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += basis[i] * basis[j];
            }
            b[i] += basis[i] * m.ln();
        }
    }
    let c = solve3(a, b).ok_or_else(|| Error::param("times", "degenerate sampling for the transit fit"))?;
    if !(c[2] < 0.0) {
        return Err(Error::param("magnitudes", "not peaked; cannot fit a Gaussian"));
    }
    let s0 = -c[1] / (2.0 * c[2]);
    let width_s = (-1.0 / (2.0 * c[2])).sqrt();
    Ok(TransitFit {
        center: mean + s0 * scale,
        width: width_s * scale,
        peak: (c[0] - c[1] * c[1] / (4.0 * c[2])).exp(),
    })
}

/// Cramer's rule; None for a singular system.
fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, o) in out.iter_mut().enumerate() {
        let mut m = a;
        for row in 0..3 {
            m[row][col] = b[row];
        }
        *o = det(m) / d;
    }
    Some(out)
}
