//! C interface to `abdirac`.
//!
//! Every entry point returns an [`AbdiracStatus`] and writes results through
//! out pointers, which are left untouched on failure. The message for the
//! most recent failure on the calling thread is available from
//! [`abdirac_last_error`]. Panics never cross the boundary; they surface as
//! `ABDIRAC_STATUS_PANIC`.
//!
//! All quantities are in natural units, hbar = c = 1.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use abdirac::bare_tube::{anomalous_limit, matching_at_kr0, matching_limit, Channel};
use abdirac::model::{make_kinematics, BarrierConfig, Coupling, Kinematics, SpinorAmplitudes};
use abdirac::propagate::{delta_closed, delta_quadrature, greens_diff_closed, GreensPoint, PacketConfig};
use abdirac::scattering::{differential_cross_section, dirac_scattering_state, scattering_amplitude, StateKind};
use abdirac::shielded::shielded_matching;
use abdirac::specfun::{bessel_j, hankel1};
use abdirac::{Complex64, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbdiracStatus {
    Ok = 0,
    NullPointer = 1,
    /// A parameter is out of range or inconsistent.
    InvalidArgument = 2,
    /// Parameters outside the regime where the requested form holds.
    Regime = 3,
    /// Convergence, overflow or tolerance failure inside the computation.
    Numerical = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AbdiracComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for AbdiracComplex {
    fn from(z: Complex64) -> Self {
        AbdiracComplex { re: z.re, im: z.im }
    }
}

impl From<AbdiracComplex> for Complex64 {
    fn from(z: AbdiracComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbdiracStateKind {
    Shielded = 0,
    Bare = 1,
}

/// Incident Gaussian packet: width, initial distance, initial angle and
/// wavenumber.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbdiracPacket {
    pub delta: f64,
    pub rho0: f64,
    pub theta0: f64,
    pub k: f64,
}

/// Coupling and kinematics of one electron state. Opaque to C.
#[derive(Debug)]
pub struct AbdiracSystem {
    coupling: Coupling,
    kin: Kinematics,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Fail(AbdiracStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Regime(_) | Error::ForwardCone { .. } | Error::DivergentAtOrigin(_) => AbdiracStatus::Regime,
            Error::InvalidParameter { .. }
            | Error::OrderOutOfRange(_)
            | Error::SingularArgument(_)
            | Error::WrongRegion { .. }
            | Error::NonEvanescentBarrier { .. }
            | Error::CouplingRange(..)
            | Error::HypergeometricPole(_) => AbdiracStatus::InvalidArgument,
            _ => AbdiracStatus::Numerical,
        };
        Fail(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    // interior NULs cannot come from our messages, but never panic here
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> AbdiracStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AbdiracStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            AbdiracStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(AbdiracStatus::NullPointer, format!("null pointer for `{what}`"))
}

/// # Safety
/// `p` is null or valid for writes of `T`.
unsafe fn write<T>(p: *mut T, what: &str, v: T) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

/// # Safety
/// `p` is null or points to a live `AbdiracSystem`.
unsafe fn system<'a>(p: *const AbdiracSystem) -> Result<&'a AbdiracSystem, Fail> {
    p.as_ref().ok_or_else(|| null("system"))
}

fn channel(ch: u8) -> Result<Channel, Fail> {
    Ok(Channel::from_index(ch)?)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn abdirac_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or "" if none.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn abdirac_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates a system with coupling alpha, total energy and mass. A NaN
/// `barrier_height` means no barrier. Free with `abdirac_system_free`.
///
/// # Safety
/// `out` is null or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn abdirac_system_new(
    alpha: f64,
    energy: f64,
    mass: f64,
    barrier_height: f64,
    out: *mut *mut AbdiracSystem,
) -> AbdiracStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let coupling = Coupling::new(alpha)?;
        let u = (!barrier_height.is_nan()).then_some(barrier_height);
        let kin = make_kinematics(energy, mass, u)?;
        write(out, "out", Box::into_raw(Box::new(AbdiracSystem { coupling, kin })))
    })
}

/// Releases a system. Null is ignored.
///
/// # Safety
/// `sys` is null or came from `abdirac_system_new` and is not used again.
#[no_mangle]
pub unsafe extern "C" fn abdirac_system_free(sys: *mut AbdiracSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Exterior wavenumber k of the system.
///
/// # Safety
/// Pointers are null or valid.
#[no_mangle]
pub unsafe extern "C" fn abdirac_system_wavenumber(sys: *const AbdiracSystem, out: *mut f64) -> AbdiracStatus {
    guard(|| write(out, "out", system(sys)?.kin.k))
}

/// Bare-tube matching coefficient A for angular momentum l, channel 1 or 2
/// and tube radius r0.
///
/// # Safety
/// Pointers are null or valid.
#[no_mangle]
pub unsafe extern "C" fn abdirac_matching_coefficient(
    sys: *const AbdiracSystem,
    l: i64,
    channel_index: u8,
    r0: f64,
    out: *mut AbdiracComplex,
) -> AbdiracStatus {
    guard(|| {
        let s = system(sys)?;
        let a = matching_at_kr0(l, channel(channel_index)?, s.coupling, &s.kin, s.kin.k * r0)?;
        write(out, "out", a.into())
    })
}

/// Limit r0 -> 0 of the bare-tube coefficient, with the extrapolation
/// error estimate in `out_error` (may be null).
///
/// # Safety
/// Pointers are null or valid.
#[no_mangle]
pub unsafe extern "C" fn abdirac_matching_limit(
    sys: *const AbdiracSystem,
    l: i64,
    channel_index: u8,
    out: *mut AbdiracComplex,
    out_error: *mut f64,
) -> AbdiracStatus {
    guard(|| {
        let s = system(sys)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let (a, err) = matching_limit(l, channel(channel_index)?, s.coupling, &s.kin)?;
        write(out, "out", a.into())?;
        if !out_error.is_null() {
            write(out_error, "out_error", err)?;
        }
        Ok(())
    })
}

/// Closed-form limit of the anomalous coefficient; fails for integer alpha.
///
/// # Safety
/// Pointers are null or valid.
#[no_mangle]
pub unsafe extern "C" fn abdirac_anomalous_limit(sys: *const AbdiracSystem, out: *mut AbdiracComplex) -> AbdiracStatus {
    guard(|| {
        let s = system(sys)?;
        let a = anomalous_limit(&s.coupling).ok_or_else(|| {
            Fail(AbdiracStatus::InvalidArgument, "integer coupling has no anomalous channel".into())
        })?;
        write(out, "out", a.into())
    })
}

/// Matching coefficient outside a shielding barrier of radius `r_outer`.
/// The system needs a barrier height.
///
/// # Safety
/// Pointers are null or valid.
#[no_mangle]
pub unsafe extern "C" fn abdirac_shielded_matching(
    sys: *const AbdiracSystem,
    l: i64,
    channel_index: u8,
    r_outer: f64,
    out: *mut AbdiracComplex,
) -> AbdiracStatus {
    guard(|| {
        let s = system(sys)?;
        let u = s.kin.barrier_height.ok_or_else(|| {
            Fail(AbdiracStatus::InvalidArgument, "system was created without a barrier height".into())
        })?;
        let barrier = BarrierConfig::new(r_outer, u, None)?;
        let a = shielded_matching(l, channel(channel_index)?, &s.coupling, &barrier, &s.kin)?;
        write(out, "out", a.value.into())
    })
}

/// Scattering amplitude f(theta) of the spinless scattered wave.
///
/// # Safety
/// Pointers are null or valid.
#[no_mangle]
pub unsafe extern "C" fn abdirac_scattering_amplitude(
    sys: *const AbdiracSystem,
    theta: f64,
    out: *mut AbdiracComplex,
) -> AbdiracStatus {
    guard(|| {
        let s = system(sys)?;
        write(out, "out", scattering_amplitude(&s.coupling, &s.kin, theta)?.into())
    })
}

/// # Safety
/// Pointers are null or valid.
#[no_mangle]
pub unsafe extern "C" fn abdirac_differential_cross_section(
    sys: *const AbdiracSystem,
    theta: f64,
    out: *mut f64,
) -> AbdiracStatus {
    guard(|| {
        let s = system(sys)?;
        write(out, "out", differential_cross_section(&s.coupling, &s.kin, theta)?)
    })
}

/// Four-component scattering state at (r, theta) for incident weights
/// (a1, a2). `out` receives four values.
///
/// # Safety
/// `sys` is null or valid; `out` is null or valid for four writes.
#[no_mangle]
pub unsafe extern "C" fn abdirac_scattering_state(
    sys: *const AbdiracSystem,
    kind: AbdiracStateKind,
    a1: AbdiracComplex,
    a2: AbdiracComplex,
    r: f64,
    theta: f64,
    out: *mut AbdiracComplex,
) -> AbdiracStatus {
    guard(|| {
        let s = system(sys)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let kind = match kind {
            AbdiracStateKind::Shielded => StateKind::Shielded,
            AbdiracStateKind::Bare => StateKind::Bare,
        };
        let amps = SpinorAmplitudes::new(a1.into(), a2.into())?;
        let state = dirac_scattering_state(kind, &amps, &s.coupling, &s.kin, r, theta)?;
        for (i, v) in state.chi.iter().enumerate() {
            out.add(i).write((*v).into());
        }
        Ok(())
    })
}

/// Difference of the bare and shielded Green's functions between (r', theta')
/// at time 0 and (r, theta) at time t, for the system's coupling and mass.
///
/// # Safety
/// Pointers are null or valid.
#[no_mangle]
pub unsafe extern "C" fn abdirac_greens_diff(
    sys: *const AbdiracSystem,
    r: f64,
    r_prime: f64,
    theta: f64,
    theta_prime: f64,
    t: f64,
    out: *mut AbdiracComplex,
) -> AbdiracStatus {
    guard(|| {
        let s = system(sys)?;
        let p = GreensPoint::new(r, r_prime, theta, theta_prime, t)?;
        write(out, "out", greens_diff_closed(&s.coupling, s.kin.mass, &p)?.into())
    })
}

fn packet(p: *const AbdiracPacket) -> Result<PacketConfig, Fail> {
    // SAFETY: callers pass null or a valid pointer
    let p = unsafe { p.as_ref() }.ok_or_else(|| null("packet"))?;
    Ok(PacketConfig::new(p.delta, p.rho0, p.theta0, p.k)?)
}

/// Closed-form packet difference Delta at (r, theta, t). Fails with
/// `ABDIRAC_STATUS_REGIME` outside the regime where it holds.
///
/// # Safety
/// Pointers are null or valid.
#[no_mangle]
pub unsafe extern "C" fn abdirac_delta_closed(
    sys: *const AbdiracSystem,
    pkt: *const AbdiracPacket,
    r: f64,
    theta: f64,
    t: f64,
    out: *mut AbdiracComplex,
) -> AbdiracStatus {
    guard(|| {
        let s = system(sys)?;
        let cfg = packet(pkt)?;
        write(out, "out", delta_closed(&cfg, &s.coupling, s.kin.mass, r, theta, t)?.into())
    })
}

/// Packet difference by quadrature over the initial packet with the exact
/// kernel; `out_error` (may be null) receives the error estimate.
///
/// # Safety
/// Pointers are null or valid.
#[no_mangle]
pub unsafe extern "C" fn abdirac_delta_quadrature(
    sys: *const AbdiracSystem,
    pkt: *const AbdiracPacket,
    r: f64,
    theta: f64,
    t: f64,
    out: *mut AbdiracComplex,
    out_error: *mut f64,
) -> AbdiracStatus {
    guard(|| {
        let s = system(sys)?;
        let cfg = packet(pkt)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let est = delta_quadrature(&cfg, &s.coupling, s.kin.mass, r, theta, t)?;
        write(out, "out", est.value.into())?;
        if !out_error.is_null() {
            write(out_error, "out_error", est.error)?;
        }
        Ok(())
    })
}

/// J_nu(z) for real order and complex argument.
///
/// # Safety
/// `out` is null or valid.
#[no_mangle]
pub unsafe extern "C" fn abdirac_bessel_j(nu: f64, z: AbdiracComplex, out: *mut AbdiracComplex) -> AbdiracStatus {
    guard(|| write(out, "out", bessel_j(nu, z.into())?.into()))
}

/// H^(1)_nu(z) for real order and complex argument.
///
/// # Safety
/// `out` is null or valid.
#[no_mangle]
pub unsafe extern "C" fn abdirac_hankel1(nu: f64, z: AbdiracComplex, out: *mut AbdiracComplex) -> AbdiracStatus {
    guard(|| write(out, "out", hankel1(nu, z.into())?.into()))
}
