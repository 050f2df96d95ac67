//! Finite-radius flux tube: interior solutions, logarithmic derivatives,
//! exterior matching coefficients, the bare-string limit r0 -> 0 and the
//! brute-force radial ODE oracle.
//!
//! Channel 1 carries e^{il theta} (upper component chi1, lower chi4), channel 2
//! carries e^{i(l+1) theta} (chi2, chi3). Normalizations a_l1 = a_l2 = 1.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::extrapolate::richardson_geometric;
use crate::model::{BarrierConfig, Coupling, Kinematics, TubeConfig};
use crate::ode::{self, Tolerance};
use crate::specfun::{self, bessel_j, hyp0f1, kummer_f};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Channel {
    One,
    Two,
}

impl Channel {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Channel::One),
            2 => Ok(Channel::Two),
            _ => Err(Error::param("channel", format!("must be 1 or 2, got {i}"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Channel::One => 1,
            Channel::Two => 2,
        }
    }

    /// Angular index m of the component: l or l + 1.
    pub fn m(self, l: i64) -> i64 {
        match self {
            Channel::One => l,
            Channel::Two => l + 1,
        }
    }

    /// Sign of the spin-field term +-qB/hbar.
    pub fn spin_sign(self) -> f64 {
        match self {
            Channel::One => 1.0,
            Channel::Two => -1.0,
        }
    }

    /// sigma in the lower-component operator (d/dr - sigma/r) acting outside
    /// the tube: l - alpha for channel 1, -(l + 1 - alpha) for channel 2.
    pub fn ladder_shift(self, l: i64, alpha: f64) -> f64 {
        match self {
            Channel::One => l as f64 - alpha,
            Channel::Two => -(l as f64 + 1.0 - alpha),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    Interior,
    Barrier,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchingCoefficient {
    pub l: i64,
    pub channel: Channel,
    #[serde(serialize_with = "crate::serialize_complex")]
    pub value: Complex64,
}

/// Exterior Bessel order |m - alpha|.
pub fn exterior_order(l: i64, channel: Channel, alpha: f64) -> f64 {
    (channel.m(l) as f64 - alpha).abs()
}

fn csqrt(x: f64) -> Complex64 {
    Complex64::new(x, 0.0).sqrt()
}

/// Regular interior solution and its r-derivative for a squared wavenumber
/// `k_sq` (k^2 for the bare tube, -kappa^2 under a barrier), unnormalized.
pub(crate) fn interior_value(
    l: i64,
    channel: Channel,
    tube: &TubeConfig,
    k_sq: f64,
    r: f64,
) -> Result<(Complex64, Complex64)> {
    if !(r >= 0.0) || r > tube.r0 * (1.0 + 1e-12) {
        return Err(Error::WrongRegion { r, region: "interior r <= r0" });
    }
    let m = channel.m(l).unsigned_abs() as i32;
    let mf = m as f64;
    let alpha = tube.coupling.alpha;
    let beta = alpha / (tube.r0 * tube.r0);
    let kch_sq = k_sq + channel.spin_sign() * 2.0 * beta;
    let kch = csqrt(kch_sq);
    let kscale = if kch.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { kch };
    let one = Complex64::new(1.0, 0.0);
    let c = Complex64::new(mf + 1.0, 0.0);

    // (F, dF/dz) in the respective variable, and the Gaussian factor
    let (f0, df_dr, gauss, gauss_dr) = if alpha == 0.0 {
        let z = Complex64::new(-k_sq * r * r / 4.0, 0.0);
        let f = hyp0f1(c, z)?;
        let f1 = hyp0f1(c + 1.0, z)?;
        let dz_dr = -k_sq * r / 2.0;
        (f, f1 / c * dz_dr, 1.0, 0.0)
    } else {
        let lf = l as f64;
        let a_re = match channel {
            Channel::One => (lf.abs() + 1.0 - lf) / 2.0,
            Channel::Two => ((lf + 1.0).abs() - lf) / 2.0,
        } - kch_sq * tube.r0 * tube.r0 / (4.0 * alpha);
        let a = Complex64::new(a_re, 0.0);
        let z = Complex64::new(beta * r * r, 0.0);
        let f = kummer_f(a, c, z)?;
        let f1 = kummer_f(a + one, c + one, z)?;
        let g = (-beta * r * r / 2.0).exp();
        (f, a / c * f1 * (2.0 * beta * r), g, -beta * r * g)
    };

    let pref = (kscale * r).powi(m);
    let chi = pref * gauss * f0;
    let dpref = if m == 0 {
        Complex64::new(0.0, 0.0)
    } else if r == 0.0 {
        if m == 1 {
            kscale
        } else {
            Complex64::new(0.0, 0.0)
        }
    } else {
        pref * (mf / r)
    };
    let dchi = dpref * gauss * f0 + pref * gauss_dr * f0 + pref * gauss * df_dr;
    Ok((chi, dchi))
}

/// Interior radial function chi_l1 (channel 1) or chi_l2 (channel 2) of the
/// bare tube, with a = 1 and the (k_ch r)^{|m|} prefactor.
pub fn interior_chi(l: i64, channel: Channel, tube: &TubeConfig, kin: &Kinematics, r: f64) -> Result<Complex64> {
    Ok(interior_value(l, channel, tube, kin.k * kin.k, r)?.0)
}

/// Lambda = (d chi / k_ch dr) / chi at r = r0 with k_ch^2 = k^2 +- qB/hbar.
/// Complex because k_ch^2 may be negative.
pub fn log_derivative_interior(l: i64, channel: Channel, tube: &TubeConfig, kin: &Kinematics) -> Result<Complex64> {
    let (chi, dchi) = interior_value(l, channel, tube, kin.k * kin.k, tube.r0)?;
    if chi.norm() == 0.0 {
        return Err(Error::Resonance(format!(
            "interior solution vanishes at r0 for l={l}, channel {}",
            channel.index()
        )));
    }
    let (k1_sq, k2_sq) = tube.k_squared(kin);
    let kch = csqrt(match channel {
        Channel::One => k1_sq,
        Channel::Two => k2_sq,
    });
    if kch.norm() == 0.0 {
        return Err(Error::Resonance("interior wavenumber vanishes".into()));
    }
    Ok(dchi / chi / kch)
}

/// The anomalous (l, channel) for which the bare-string limit keeps a finite
/// matching coefficient: (l = [alpha], 1) for alpha > 0, (l = [alpha], 2) for
/// alpha < 0, none for integer alpha.
pub fn anomalous_channel(coupling: &Coupling) -> Option<(i64, Channel)> {
    if coupling.is_integer() {
        None
    } else if coupling.alpha > 0.0 {
        Some((coupling.int_part, Channel::One))
    } else {
        Some((coupling.int_part, Channel::Two))
    }
}

/// Limiting value of the anomalous coefficient as k r0 -> 0.
pub fn anomalous_limit(coupling: &Coupling) -> Option<Complex64> {
    let pa = PI * coupling.alpha;
    anomalous_channel(coupling).map(|(_, ch)| match ch {
        Channel::One => Complex64::new(0.0, pa.sin()) * Complex64::from_polar(1.0, pa),
        Channel::Two => Complex64::new(0.0, -pa.sin()) * Complex64::from_polar(1.0, -pa),
    })
}

pub(crate) const RESONANCE_GUARD: f64 = 1e-12;

/// A = -(J' chi - (chi'/k) J) / (H' chi - (chi'/k) H) at x = k r_edge; the
/// product form avoids dividing by chi.
pub(crate) fn match_exterior(
    nu: f64,
    x: f64,
    k: f64,
    chi: Complex64,
    dchi: Complex64,
    anomalous: Option<Complex64>,
) -> Result<Complex64> {
    let cyl = specfun::cylinder(nu, Complex64::new(x, 0.0))?;
    let i = Complex64::i();
    let h = cyl.j + i * cyl.y;
    let hp = cyl.jp + i * cyl.yp;
    let g = dchi / k;
    let num = cyl.jp * chi - g * cyl.j;
    let den = hp * chi - g * h;
    let scale = (hp * chi).norm() + (g * h).norm();
    if den.norm() < RESONANCE_GUARD * scale || den.norm() == 0.0 {
        return match anomalous {
            Some(v) => Ok(v),
            None => Err(Error::Resonance(format!(
                "matching denominator vanishes (|D| = {:e}, scale {:e})",
                den.norm(),
                scale
            ))),
        };
    }
    let a = -num / den;
    if !(a.re.is_finite() && a.im.is_finite()) {
        return Err(Error::Overflow { nu, abs_z: x });
    }
    Ok(a)
}

/// Exterior matching coefficient A_l1 or A_l2 of the finite tube.
pub fn matching_coefficient(
    l: i64,
    channel: Channel,
    tube: &TubeConfig,
    kin: &Kinematics,
) -> Result<MatchingCoefficient> {
    let x = kin.k * tube.r0;
    if !(x > 0.0) {
        return Err(Error::param("k r0", "must be positive"));
    }
    let (chi, dchi) = interior_value(l, channel, tube, kin.k * kin.k, tube.r0)?;
    let nu = exterior_order(l, channel, tube.coupling.alpha);
    let anomalous = match anomalous_channel(&tube.coupling) {
        Some((la, ca)) if la == l && ca == channel => anomalous_limit(&tube.coupling),
        _ => None,
    };
    let value = match_exterior(nu, x, kin.k, chi, dchi, anomalous)?;
    Ok(MatchingCoefficient { l, channel, value })
}

/// Matching coefficient at a given k r0 for fixed kinematics.
pub fn matching_at_kr0(l: i64, channel: Channel, coupling: Coupling, kin: &Kinematics, kr0: f64) -> Result<Complex64> {
    let tube = TubeConfig::new(kr0 / kin.k, coupling)?;
    Ok(matching_coefficient(l, channel, &tube, kin)?.value)
}

/// Leading exponent of |A| - |A_limit| for small k r0, used by the
/// extrapolation: 2(1 - nu) for the anomalous channel, 2 nu otherwise.
fn approach_exponent(l: i64, channel: Channel, coupling: &Coupling) -> f64 {
    let nu = exterior_order(l, channel, coupling.alpha);
    match anomalous_channel(coupling) {
        Some((la, ca)) if la == l && ca == channel => 2.0 * (1.0 - nu),
        _ => 2.0 * nu,
    }
}

/// Bare-string limit r0 -> 0 of A by Richardson extrapolation over the
/// geometric sequence k r0 = 1e-2, 1e-3, ..., 1e-6.
pub fn matching_limit(l: i64, channel: Channel, coupling: Coupling, kin: &Kinematics) -> Result<(Complex64, f64)> {
    let q: f64 = 0.1;
    let xs: Vec<f64> = (0..5).map(|j| 1e-2 * q.powi(j)).collect();
    let vals = xs
        .iter()
        .map(|&x| matching_at_kr0(l, channel, coupling, kin, x))
        .collect::<Result<Vec<_>>>()?;
    let p = approach_exponent(l, channel, &coupling);
    let exps = [p, 2.0, 2.0 * p, p + 2.0];
    Ok(richardson_geometric(&vals, q, &exps))
}

/// Order of the principal Bessel function of the bare string in the given
/// channel: |m - alpha|, except the anomalous channel which takes the negative
/// order [alpha] - alpha (channel 1) or alpha - [alpha] - 1 (channel 2).
pub fn bare_string_order(l: i64, channel: Channel, coupling: &Coupling) -> f64 {
    match anomalous_channel(coupling) {
        Some((la, ca)) if la == l && ca == channel => match ca {
            Channel::One => -coupling.frac,
            Channel::Two => coupling.frac - 1.0,
        },
        _ => exterior_order(l, channel, coupling.alpha),
    }
}

/// (d/dr - sigma/r) J_nu(k r) where sigma = +-nu, by the ladder relations.
pub(crate) fn ladder(nu: f64, sigma: f64, k: f64, r: f64) -> Result<Complex64> {
    let z = Complex64::new(k * r, 0.0);
    if (sigma - nu).abs() <= 1e-12 * (1.0 + nu.abs()) {
        Ok(-bessel_j(nu + 1.0, z)? * k)
    } else if (sigma + nu).abs() <= 1e-12 * (1.0 + nu.abs()) {
        Ok(bessel_j(nu - 1.0, z)? * k)
    } else {
        Err(Error::param("sigma", format!("ladder shift {sigma} does not match order {nu}")))
    }
}

fn negative_noninteger(nu: f64) -> bool {
    nu < 0.0 && nu != nu.trunc()
}

/// Bare-string radial components [chi1, chi2, chi3, chi4] of angular momentum
/// l with a_l1 = a_l2 = 1; lower components through the free ladder operators.
pub fn bare_string_radial(l: i64, coupling: &Coupling, kin: &Kinematics, r: f64) -> Result<[Complex64; 4]> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::param("r", format!("must be >= 0, got {r}")));
    }
    let n1 = bare_string_order(l, Channel::One, coupling);
    let n2 = bare_string_order(l, Channel::Two, coupling);
    let s1 = Channel::One.ladder_shift(l, coupling.alpha);
    let s2 = Channel::Two.ladder_shift(l, coupling.alpha);
    let lower_orders = [
        if (s1 - n1).abs() < 1e-12 { n1 + 1.0 } else { n1 - 1.0 },
        if (s2 - n2).abs() < 1e-12 { n2 + 1.0 } else { n2 - 1.0 },
    ];
    if r == 0.0 {
        let anomalous = anomalous_channel(coupling).is_some_and(|(la, _)| la == l);
        if anomalous
            || negative_noninteger(n1)
            || negative_noninteger(n2)
            || lower_orders.iter().any(|&o| negative_noninteger(o))
        {
            return Err(Error::DivergentAtOrigin("bare-string component at r = 0"));
        }
    }
    let z = Complex64::new(kin.k * r, 0.0);
    let chi1 = bessel_j(n1, z)?;
    let chi2 = bessel_j(n2, z)?;
    let pre = Complex64::new(0.0, -kin.hbar_c() / (kin.energy + kin.rest_energy()));
    let chi4 = pre * ladder(n1, s1, kin.k, r)?;
    let chi3 = pre * ladder(n2, s2, kin.k, r)?;
    Ok([chi1, chi2, chi3, chi4])
}

/// One radial sample of a full partial wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialSample {
    pub r: f64,
    pub region: Region,
    #[serde(serialize_with = "crate::serialize_complex_array")]
    pub chi: [Complex64; 4],
}

/// Partial wave l of the finite tube, continuous at r0, with a_l1 = a_l2 = 1:
/// exterior chi1 = J + A_l1 H, chi2 = J + A_l2 H.
#[derive(Debug, Clone)]
pub struct RadialSolution {
    pub l: i64,
    pub tube: TubeConfig,
    pub kin: Kinematics,
    pub a_l1: Complex64,
    pub a_l2: Complex64,
    pub matching: [Complex64; 2],
    interior_scale: [Complex64; 2],
}

impl RadialSolution {
    pub fn new(l: i64, tube: TubeConfig, kin: Kinematics) -> Result<Self> {
        let mut matching = [Complex64::new(0.0, 0.0); 2];
        let mut interior_scale = [Complex64::new(0.0, 0.0); 2];
        for (i, ch) in [Channel::One, Channel::Two].into_iter().enumerate() {
            let a = matching_coefficient(l, ch, &tube, &kin)?.value;
            let nu = exterior_order(l, ch, tube.coupling.alpha);
            let z = Complex64::new(kin.k * tube.r0, 0.0);
            let ext = bessel_j(nu, z)? + a * specfun::hankel1(nu, z)?;
            let (chi, _) = interior_value(l, ch, &tube, kin.k * kin.k, tube.r0)?;
            matching[i] = a;
            interior_scale[i] = ext / chi;
        }
        Ok(RadialSolution {
            l,
            tube,
            kin,
            a_l1: Complex64::new(1.0, 0.0),
            a_l2: Complex64::new(1.0, 0.0),
            matching,
            interior_scale,
        })
    }

    /// (chi, dchi/dr) of the principal component of a channel.
    pub fn principal(&self, channel: Channel, r: f64) -> Result<(Complex64, Complex64)> {
        let i = (channel.index() - 1) as usize;
        if r <= self.tube.r0 {
            let (c, d) = interior_value(self.l, channel, &self.tube, self.kin.k * self.kin.k, r)?;
            Ok((c * self.interior_scale[i], d * self.interior_scale[i]))
        } else {
            let nu = exterior_order(self.l, channel, self.tube.coupling.alpha);
            let cyl = specfun::cylinder(nu, Complex64::new(self.kin.k * r, 0.0))?;
            let a = self.matching[i];
            let ic = Complex64::i();
            let v = cyl.j + a * (cyl.j + ic * cyl.y);
            let dv = (cyl.jp + a * (cyl.jp + ic * cyl.yp)) * self.kin.k;
            Ok((v, dv))
        }
    }

    /// All four components at r > 0, lower ones from the first-order operators
    /// with the piecewise vector potential.
    pub fn sample(&self, r: f64) -> Result<RadialSample> {
        if !(r > 0.0) {
            return Err(Error::param("r", "lower components need r > 0"));
        }
        let alpha = self.tube.coupling.alpha;
        let lf = self.l as f64;
        // q A_theta / hbar
        let qa = if r <= self.tube.r0 {
            alpha * r / (self.tube.r0 * self.tube.r0)
        } else {
            alpha / r
        };
        let (c1, d1) = self.principal(Channel::One, r)?;
        let (c2, d2) = self.principal(Channel::Two, r)?;
        let pre = Complex64::new(0.0, -self.kin.hbar_c() / (self.kin.energy + self.kin.rest_energy()));
        let chi3 = pre * self.a_l2 * (d2 + c2 * ((lf + 1.0) / r - qa));
        let chi4 = pre * self.a_l1 * (d1 - c1 * (lf / r - qa));
        Ok(RadialSample {
            r,
            region: if r <= self.tube.r0 { Region::Interior } else { Region::Exterior },
            chi: [self.a_l1 * c1, self.a_l2 * c2, chi3, chi4],
        })
    }
}

/// One point of the ODE oracle: chi and d chi / dr.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeSample {
    pub r: f64,
    pub chi: f64,
    pub dchi: f64,
}

/// Integrates the second-order radial equation of one channel outward from
/// r = 1e-8 r0, starting on the regular series r^{|m|}(1 + c2 r^2), through
/// the tube edge (value and slope continuous) and, if present, the barrier
/// edge (slope jump from continuity of the lower component). Returns samples
/// at the requested ascending radii.
pub fn ode_radial_oracle(
    l: i64,
    channel: Channel,
    tube: &TubeConfig,
    barrier: Option<&BarrierConfig>,
    kin: &Kinematics,
    radii: &[f64],
) -> Result<Vec<OdeSample>> {
    if radii.windows(2).any(|w| w[1] < w[0]) || radii.first().is_some_and(|&r| r <= 0.0) {
        return Err(Error::param("radii", "must be positive and ascending"));
    }
    let alpha = tube.coupling.alpha;
    let r0 = tube.r0;
    let m = channel.m(l) as f64;
    let s = channel.spin_sign();
    let beta = alpha / (r0 * r0);
    let k_sq = kin.k * kin.k;
    let (r_bar, kappa_sq, rho) = match barrier {
        Some(b) => {
            b.check_window(kin)?;
            if b.r_outer <= r0 {
                return Err(Error::param("R0", "must exceed r0"));
            }
            let kappa = kin.with_barrier(Some(b.height))?.kappa_or_err()?;
            let e_m = kin.energy + kin.rest_energy();
            (b.r_outer, kappa * kappa, e_m / (e_m - b.height))
        }
        None => (0.0, 0.0, 1.0),
    };
    let wave_sq = |r: f64| if r < r_bar { -kappa_sq } else { k_sq };

    // r^2 Q(r) on each side of r0
    let inner = move |r: f64, ksq: f64| {
        let a = m - beta * r * r;
        r * r * ksq - a * a + s * 2.0 * beta * r * r
    };
    let outer = move |r: f64, ksq: f64| {
        let a = m - alpha;
        r * r * ksq - a * a
    };

    let r_start = 1e-8 * r0;
    let m_abs = m.abs();
    let k_in = wave_sq(0.0);
    let e_eff = k_in + 2.0 * beta * (m + if s > 0.0 { 1.0 } else { -1.0 });
    let c2 = -e_eff / (4.0 * (m_abs + 1.0));
    let rs2 = r_start * r_start;
    // integrate u = chi r^{-|m|}, which stays smooth at the origin; state (u, r u')
    let mut state = [1.0 + c2 * rs2, 2.0 * c2 * rs2];
    let mut t = r_start.ln();
    let pw_at = |r: f64| r.powf(m_abs);

    let mut breaks: Vec<f64> = vec![r0];
    if barrier.is_some() {
        breaks.push(r_bar);
    }
    let tol = Tolerance::default();
    let mut out = Vec::with_capacity(radii.len());
    let mut targets: Vec<(f64, bool)> = breaks.iter().map(|&b| (b, true)).collect();
    targets.extend(radii.iter().map(|&r| (r, false)));
    targets.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1).reverse()));

    for (r_target, is_break) in targets {
        if r_target < r_start {
            return Err(Error::param("radii", "sample radius below the series start"));
        }
        let t1 = r_target.ln();
        let mid = (t.exp() * t1.exp()).sqrt();
        let inside = mid < r0;
        let ksq = wave_sq(mid);
        let rhs = move |tt: f64, y: &[f64; 2]| {
            let r = tt.exp();
            let rq = if inside { inner(r, ksq) } else { outer(r, ksq) };
            [y[1], -2.0 * m_abs * y[1] - (rq + m_abs * m_abs) * y[0]]
        };
        state = ode::integrate(rhs, t, t1, state, tol)?;
        t = t1;
        if is_break && barrier.is_some() && r_target == r_bar {
            // chi' jump across the barrier edge
            let sigma = channel.ladder_shift(l, alpha);
            // r chi'/r^{|m|} = |m| u + r u'
            let u = state[0];
            let d_in = m_abs * u + state[1];
            let d_out = sigma * u + rho * (d_in - sigma * u);
            state[1] = d_out - m_abs * u;
        }
        if !is_break {
            out.push(OdeSample {
                r: r_target,
                chi: pw_at(r_target) * state[0],
                dchi: pw_at(r_target) * (m_abs * state[0] + state[1]) / r_target,
            });
        }
    }
    Ok(out)
}

/// A extracted from the ODE oracle by fitting chi = a (J + A H) at 1.5 and
/// 2.5 times the outermost edge.
pub fn ode_matching_coefficient(
    l: i64,
    channel: Channel,
    tube: &TubeConfig,
    barrier: Option<&BarrierConfig>,
    kin: &Kinematics,
) -> Result<Complex64> {
    let edge = barrier.map_or(tube.r0, |b| b.r_outer.max(tube.r0));
    let ra = 1.5 * edge;
    let rb = 2.5 * edge;
    let samples = ode_radial_oracle(l, channel, tube, barrier, kin, &[ra, rb])?;
    let nu = exterior_order(l, channel, tube.coupling.alpha);
    let ja = bessel_j(nu, Complex64::new(kin.k * ra, 0.0))?;
    let jb = bessel_j(nu, Complex64::new(kin.k * rb, 0.0))?;
    let ha = specfun::hankel1(nu, Complex64::new(kin.k * ra, 0.0))?;
    let hb = specfun::hankel1(nu, Complex64::new(kin.k * rb, 0.0))?;
    let (ca, cb) = (samples[0].chi, samples[1].chi);
    // [ja ha; jb hb] [a; b] = [ca; cb]
    let det = ja * hb - jb * ha;
    let a = (hb * ca - ha * cb) / det;
    let b = (ja * cb - jb * ca) / det;
    Ok(b / a)
}
