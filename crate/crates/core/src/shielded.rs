//! Shielded string: a flux tube of vanishing radius inside an evanescent
//! barrier U for r < R0.
//!
//! In the barrier the principal components reduce to J_nu(i kappa r) with the
//! same order selection as the bare string (negative order in the anomalous
//! channel). Matching at R0 goes through the factors f, and the kR0 -> 0 limit
//! gives eigenfunctions with positive orders in every channel.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::bare_tube::{bare_string_order, bare_string_radial, exterior_order, ladder, Channel, MatchingCoefficient};
use crate::error::{Error, Result};
use crate::extrapolate::richardson_geometric;
use crate::model::{BarrierConfig, Coupling, Kinematics, UnitSystem};
use crate::specfun::{self, bessel_i_scaled, bessel_j};

/// Barrier decay constant for the given barrier; the window E - Mc^2 < U <
/// E + Mc^2 is enforced.
pub fn barrier_kappa(barrier: &BarrierConfig, kin: &Kinematics) -> Result<f64> {
    barrier.check_window(kin)?;
    kin.with_barrier(Some(barrier.height))?.kappa_or_err()
}

/// Signed order of J_nu(i kappa r) in the barrier region for r0 -> 0.
pub fn barrier_order(l: i64, channel: Channel, coupling: &Coupling) -> f64 {
    bare_string_order(l, channel, coupling)
}

/// J_nu(i kappa r) with the selected order, kappa taken from `kin`.
pub fn barrier_radial_limit(l: i64, channel: Channel, coupling: &Coupling, kin: &Kinematics, r: f64) -> Result<Complex64> {
    let kappa = kin.kappa_or_err()?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::param("r", format!("must be positive, got {r}")));
    }
    bessel_j(barrier_order(l, channel, coupling), Complex64::new(0.0, kappa * r))
}

/// Lambda^(R0) = (d chi / kappa dr) / chi at R0 for chi = J_nu(i kappa r).
/// Since J_nu(ix) = e^{i pi nu/2} I_nu(x) this is I'_nu/I_nu, which is real;
/// it tends to 1 - 1/(2 kappa R0) for kappa R0 >> 1.
pub fn barrier_log_derivative(l: i64, channel: Channel, coupling: &Coupling, kappa_r0: f64) -> Result<f64> {
    let (i, ip) = bessel_i_scaled(barrier_order(l, channel, coupling), kappa_r0)?;
    if i == 0.0 {
        return Err(Error::Resonance(format!("I_nu vanishes at kappa R0 = {kappa_r0}")));
    }
    Ok(ip / i)
}

/// f = rho Lambda - U/(E + Mc^2 - U) sigma/(kappa R0), rho = (E+Mc^2)/(E+Mc^2-U),
/// where sigma = l - alpha (channel 1) or -(l + 1 - alpha) (channel 2).
pub fn f_combination(lambda: f64, sigma: f64, energy_plus_rest: f64, u: f64, kappa_r0: f64) -> Result<Complex64> {
    let den = energy_plus_rest - u;
    if den == 0.0 {
        return Err(Error::param("U", "E + Mc^2 - U = 0 is excluded"));
    }
    if !(kappa_r0 > 0.0) {
        return Err(Error::param("kappa R0", "must be positive"));
    }
    Ok(Complex64::new(
        energy_plus_rest / den * lambda - u / den * sigma / kappa_r0,
        0.0,
    ))
}

/// The factor f_l1 or f_l2 entering the matching at R0.
pub fn f_factor(
    l: i64,
    channel: Channel,
    coupling: &Coupling,
    barrier: &BarrierConfig,
    kin: &Kinematics,
) -> Result<Complex64> {
    let kappa = barrier_kappa(barrier, kin)?;
    let x = kappa * barrier.r_outer;
    let lambda = barrier_log_derivative(l, channel, coupling, x)?;
    let sigma = channel.ladder_shift(l, coupling.alpha);
    f_combination(lambda, sigma, kin.energy + kin.rest_energy(), barrier.height, x)
}

/// Numerator and denominator of the R0 matching: J' - (kappa/k) f J and
/// H' - (kappa/k) f H at k R0, primes with respect to k r.
fn matching_parts(
    l: i64,
    channel: Channel,
    coupling: &Coupling,
    barrier: &BarrierConfig,
    kin: &Kinematics,
) -> Result<(Complex64, Complex64, f64)> {
    let x = kin.k * barrier.r_outer;
    if !(x > 0.0) {
        return Err(Error::param("k R0", "must be positive"));
    }
    let kappa = barrier_kappa(barrier, kin)?;
    let f = f_factor(l, channel, coupling, barrier, kin)?;
    let g = f * (kappa / kin.k);
    let nu = exterior_order(l, channel, coupling.alpha);
    let cyl = specfun::cylinder(nu, Complex64::new(x, 0.0))?;
    let i = Complex64::i();
    let h = cyl.j + i * cyl.y;
    let hp = cyl.jp + i * cyl.yp;
    let scale = hp.norm() + (g * h).norm();
    Ok((cyl.jp - g * cyl.j, hp - g * h, scale))
}

/// Exterior coefficient A^(R0) of J + A H^(1) outside the barrier.
pub fn shielded_matching(
    l: i64,
    channel: Channel,
    coupling: &Coupling,
    barrier: &BarrierConfig,
    kin: &Kinematics,
) -> Result<MatchingCoefficient> {
    let (num, den, scale) = matching_parts(l, channel, coupling, barrier, kin)?;
    if den.norm() <= crate::bare_tube::RESONANCE_GUARD * scale {
        return Err(Error::param(
            "barrier",
            format!("matching denominator vanishes (|D| = {:e}); parameters outside the valid regime", den.norm()),
        ));
    }
    let value = -num / den;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Overflow {
            nu: exterior_order(l, channel, coupling.alpha),
            abs_z: kin.k * barrier.r_outer,
        });
    }
    Ok(MatchingCoefficient { l, channel, value })
}

/// Exact matching denominator H' - (kappa/k) f H.
pub fn matching_denominator(
    l: i64,
    channel: Channel,
    coupling: &Coupling,
    barrier: &BarrierConfig,
    kin: &Kinematics,
) -> Result<Complex64> {
    Ok(matching_parts(l, channel, coupling, barrier, kin)?.1)
}

/// Leading form of the denominator for kR0 << 1, Lambda -> 1, using
/// H' ~ -(nu/kR0) H:
/// H [(E+Mc^2)(-nu/kR0 - kappa/k) + U (nu + sigma)/kR0] / (E + Mc^2 - U).
pub fn denominator_leading_form(
    l: i64,
    channel: Channel,
    coupling: &Coupling,
    barrier: &BarrierConfig,
    kin: &Kinematics,
) -> Result<Complex64> {
    let kappa = barrier_kappa(barrier, kin)?;
    let x = kin.k * barrier.r_outer;
    let nu = exterior_order(l, channel, coupling.alpha);
    let sigma = channel.ladder_shift(l, coupling.alpha);
    let em = kin.energy + kin.rest_energy();
    let u = barrier.height;
    if em - u == 0.0 {
        return Err(Error::param("U", "E + Mc^2 - U = 0 is excluded"));
    }
    let bracket = (em * (-nu / x - kappa / kin.k) + u * (nu + sigma) / x) / (em - u);
    Ok(specfun::hankel1(nu, Complex64::new(x, 0.0))? * bracket)
}

/// Kinematics and barrier radius with prescribed k R0 and kappa R0 at fixed
/// U and mass. Solves k = (kR0/kappaR0) kappa(E(k)) by fixed-point iteration,
/// which contracts because kappa depends on k only through E.
pub fn kinematics_for_ratios(
    units: UnitSystem,
    mass: f64,
    u: f64,
    k_r0: f64,
    kappa_r0: f64,
) -> Result<(Kinematics, BarrierConfig)> {
    if !(k_r0 > 0.0 && kappa_r0 > 0.0) {
        return Err(Error::param("k R0, kappa R0", "must be positive"));
    }
    let ratio = k_r0 / kappa_r0;
    let mut k = ratio * mass * units.c / units.hbar;
    let mut kin = Kinematics::from_wavenumber(units, k, mass, Some(u))?;
    for _ in 0..200 {
        let next = ratio * kin.kappa_or_err()?;
        kin = Kinematics::from_wavenumber(units, next, mass, Some(u))?;
        if (next - k).abs() <= 1e-15 * next {
            k = next;
            break;
        }
        k = next;
    }
    let barrier = BarrierConfig::new(k_r0 / k, u, None)?;
    Ok((kin, barrier))
}

/// Limit kR0 -> 0 of A^(R0) at fixed kappa R0 by the geometric Richardson
/// scheme of the bare tube (kR0 = 1e-2 ... 1e-6). The leading term itself
/// scales as (kR0)^{2nu}, so the limit is zero for every channel.
pub fn shielded_matching_limit(
    l: i64,
    channel: Channel,
    coupling: Coupling,
    units: UnitSystem,
    mass: f64,
    u: f64,
    kappa_r0: f64,
) -> Result<(Complex64, f64)> {
    let q: f64 = 0.1;
    let vals = (0..5)
        .map(|j| {
            let (kin, bar) = kinematics_for_ratios(units, mass, u, 1e-2 * q.powi(j), kappa_r0)?;
            Ok(shielded_matching(l, channel, &coupling, &bar, &kin)?.value)
        })
        .collect::<Result<Vec<_>>>()?;
    let p = 2.0 * exterior_order(l, channel, coupling.alpha);
    Ok(richardson_geometric(&vals, q, &[p, p + 2.0, 2.0 * p, p + 4.0]))
}

/// Principal component in r0 < r < R0 for r0 -> 0, continuous at R0 with the
/// exterior J + A H^(1) (a = 1). The representation C H^(1)_|nu| + D H^(2)_|nu|
/// of J_nu(i kappa r) has C = D = 1/2 for nu >= 0 and C = e^{i pi |nu|}/2,
/// D = e^{-i pi |nu|}/2 for negative nu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierSolution {
    pub l: i64,
    pub channel: Channel,
    /// Signed order nu of J_nu(i kappa r).
    pub order: f64,
    pub kappa: f64,
    pub r_outer: f64,
    #[serde(serialize_with = "crate::serialize_complex")]
    pub c: Complex64,
    #[serde(serialize_with = "crate::serialize_complex")]
    pub d: Complex64,
    /// Exterior coefficient A^(R0).
    #[serde(serialize_with = "crate::serialize_complex")]
    pub matching: Complex64,
    #[serde(serialize_with = "crate::serialize_complex")]
    scale: Complex64,
}

impl BarrierSolution {
    pub fn new(
        l: i64,
        channel: Channel,
        coupling: &Coupling,
        barrier: &BarrierConfig,
        kin: &Kinematics,
    ) -> Result<Self> {
        let kappa = barrier_kappa(barrier, kin)?;
        let order = barrier_order(l, channel, coupling);
        let mu = order.abs();
        let (c, d) = if order >= 0.0 {
            (Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0))
        } else {
            (Complex64::from_polar(0.5, PI * mu), Complex64::from_polar(0.5, -PI * mu))
        };
        let matching = shielded_matching(l, channel, coupling, barrier, kin)?.value;
        let nu = exterior_order(l, channel, coupling.alpha);
        let z = Complex64::new(kin.k * barrier.r_outer, 0.0);
        let ext = bessel_j(nu, z)? + matching * specfun::hankel1(nu, z)?;
        let inner = bessel_j(order, Complex64::new(0.0, kappa * barrier.r_outer))?;
        if inner.norm() == 0.0 {
            return Err(Error::Resonance("barrier solution vanishes at R0".into()));
        }
        Ok(BarrierSolution {
            l,
            channel,
            order,
            kappa,
            r_outer: barrier.r_outer,
            c,
            d,
            matching,
            scale: ext / inner,
        })
    }

    /// Principal component at 0 < r <= R0.
    pub fn value(&self, r: f64) -> Result<Complex64> {
        if !(r > 0.0) || r > self.r_outer {
            return Err(Error::WrongRegion { r, region: "barrier 0 < r <= R0" });
        }
        Ok(self.scale * bessel_j(self.order, Complex64::new(0.0, self.kappa * r))?)
    }

    /// The same component assembled from the Hankel pair.
    pub fn value_from_hankel(&self, r: f64) -> Result<Complex64> {
        if !(r > 0.0) || r > self.r_outer {
            return Err(Error::WrongRegion { r, region: "barrier 0 < r <= R0" });
        }
        let z = Complex64::new(0.0, self.kappa * r);
        let mu = self.order.abs();
        Ok(self.scale * (self.c * specfun::hankel1(mu, z)? + self.d * specfun::hankel2(mu, z)?))
    }
}

/// Four radial components of a partial wave at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShieldedEigenfunction {
    pub l: i64,
    pub r: f64,
    #[serde(serialize_with = "crate::serialize_complex_array")]
    pub chi: [Complex64; 4],
}

/// Shielded-string eigenfunction with a_l1 = a_l2 = 1: positive orders
/// |l - alpha|, |l + 1 - alpha| in the principal components and the lower
/// pair from (d/dr + (l+1-alpha)/r) and (d/dr - (l-alpha)/r).
pub fn shielded_eigenfunction(l: i64, coupling: &Coupling, kin: &Kinematics, r: f64) -> Result<ShieldedEigenfunction> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::param("r", format!("must be positive, got {r}")));
    }
    let n1 = exterior_order(l, Channel::One, coupling.alpha);
    let n2 = exterior_order(l, Channel::Two, coupling.alpha);
    let s1 = Channel::One.ladder_shift(l, coupling.alpha);
    let s2 = Channel::Two.ladder_shift(l, coupling.alpha);
    let z = Complex64::new(kin.k * r, 0.0);
    let pre = Complex64::new(0.0, -kin.hbar_c() / (kin.energy + kin.rest_energy()));
    let chi = [
        bessel_j(n1, z)?,
        bessel_j(n2, z)?,
        pre * ladder(n2, s2, kin.k, r)?,
        pre * ladder(n1, s1, kin.k, r)?,
    ];
    Ok(ShieldedEigenfunction { l, r, chi })
}

/// The l = 0 components of the bare and shielded strings side by side, with
/// unit amplitudes b = a = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L0Comparison {
    pub r: f64,
    #[serde(serialize_with = "crate::serialize_complex_array")]
    pub bare: [Complex64; 4],
    #[serde(serialize_with = "crate::serialize_complex_array")]
    pub shielded: [Complex64; 4],
}

/// Requires 0 < alpha < 1, where l = 0 is the anomalous partial wave.
pub fn bare_vs_shielded_l0(coupling: &Coupling, kin: &Kinematics, r: f64) -> Result<L0Comparison> {
    if !(coupling.alpha > 0.0 && coupling.alpha < 1.0) {
        return Err(Error::CouplingRange(coupling.alpha, "(0, 1)"));
    }
    if !(r > 0.0) {
        return Err(Error::param("r", format!("must be positive, got {r}")));
    }
    Ok(L0Comparison {
        r,
        bare: bare_string_radial(0, coupling, kin, r)?,
        shielded: shielded_eigenfunction(0, coupling, kin, r)?.chi,
    })
}
