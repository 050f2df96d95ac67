//! The C entry points against direct calls into the core crate.

use std::ffi::CStr;
use std::ptr;

use abdirac::bare_tube::{matching_at_kr0, Channel};
use abdirac::model::{make_kinematics, Coupling};
use abdirac::propagate::{delta_closed, PacketConfig};
use abdirac::scattering::scattering_amplitude;
use abdirac::specfun::hankel1;
use abdirac::Complex64;
use abdirac_ffi::*;

const E: f64 = std::f64::consts::SQRT_2;

struct Handle(*mut AbdiracSystem);

impl Handle {
    fn new(alpha: f64, u: f64) -> Handle {
        let mut p = ptr::null_mut();
        let s = unsafe { abdirac_system_new(alpha, E, 1.0, u, &mut p) };
        assert_eq!(s, AbdiracStatus::Ok, "{}", last_error());
        assert!(!p.is_null());
        Handle(p)
    }
}

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { abdirac_system_free(self.0) };
    }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(abdirac_last_error()) }.to_string_lossy().into_owned()
}

fn c(z: AbdiracComplex) -> Complex64 {
    z.into()
}

#[test]
fn values_match_the_core_crate() {
    let h = Handle::new(0.3, f64::NAN);
    let coupling = Coupling::new(0.3).unwrap();
    let kin = make_kinematics(E, 1.0, None).unwrap();

    let mut k = 0.0;
    assert_eq!(unsafe { abdirac_system_wavenumber(h.0, &mut k) }, AbdiracStatus::Ok);
    assert_eq!(k, kin.k);

    let mut a = AbdiracComplex::default();
    assert_eq!(unsafe { abdirac_matching_coefficient(h.0, 0, 1, 1e-3, &mut a) }, AbdiracStatus::Ok);
    assert_eq!(c(a), matching_at_kr0(0, Channel::from_index(1).unwrap(), coupling, &kin, kin.k * 1e-3).unwrap());

    let mut f = AbdiracComplex::default();
    assert_eq!(unsafe { abdirac_scattering_amplitude(h.0, 1.0, &mut f) }, AbdiracStatus::Ok);
    assert_eq!(c(f), scattering_amplitude(&coupling, &kin, 1.0).unwrap());

    let mut ds = 0.0;
    assert_eq!(unsafe { abdirac_differential_cross_section(h.0, 1.0, &mut ds) }, AbdiracStatus::Ok);
    assert!((ds - c(f).norm_sqr()).abs() <= 1e-12 * ds);

    let mut hz = AbdiracComplex::default();
    let z = AbdiracComplex { re: 3.0, im: 0.5 };
    assert_eq!(unsafe { abdirac_hankel1(0.3, z, &mut hz) }, AbdiracStatus::Ok);
    assert_eq!(c(hz), hankel1(0.3, z.into()).unwrap());
}

#[test]
fn limits_approach_the_closed_form() {
    let h = Handle::new(0.3, f64::NAN);
    let (mut lim, mut exact, mut err) = (AbdiracComplex::default(), AbdiracComplex::default(), 0.0);
    assert_eq!(unsafe { abdirac_matching_limit(h.0, 0, 1, &mut lim, &mut err) }, AbdiracStatus::Ok);
    assert_eq!(unsafe { abdirac_anomalous_limit(h.0, &mut exact) }, AbdiracStatus::Ok);
    assert!((c(lim) - c(exact)).norm() < 1e-3, "{lim:?} {exact:?}");
    assert!(err.is_finite());
    // the error pointer is optional
    assert_eq!(unsafe { abdirac_matching_limit(h.0, 0, 1, &mut lim, ptr::null_mut()) }, AbdiracStatus::Ok);
}

#[test]
fn packet_difference_matches_core() {
    let h = Handle::new(0.5, f64::NAN);
    let pkt = AbdiracPacket { delta: 1.0, rho0: 20.0, theta0: 0.3, k: 4.0 };
    let mut d = AbdiracComplex::default();
    let s = unsafe { abdirac_delta_closed(h.0, &pkt, 20.0, std::f64::consts::PI, 10.0, &mut d) };
    let cfg = PacketConfig::new(1.0, 20.0, 0.3, 4.0).unwrap();
    let direct = delta_closed(&cfg, &Coupling::new(0.5).unwrap(), 1.0, 20.0, std::f64::consts::PI, 10.0);
    match direct {
        Ok(v) => {
            assert_eq!(s, AbdiracStatus::Ok, "{}", last_error());
            assert_eq!(c(d), v);
        }
        Err(e) => {
            assert_ne!(s, AbdiracStatus::Ok);
            assert_eq!(last_error(), e.to_string());
        }
    }
}

#[test]
fn null_pointers_are_reported() {
    let h = Handle::new(0.3, f64::NAN);
    let mut a = AbdiracComplex::default();
    assert_eq!(unsafe { abdirac_matching_coefficient(ptr::null(), 0, 1, 1e-3, &mut a) }, AbdiracStatus::NullPointer);
    assert!(last_error().contains("system"));
    assert_eq!(unsafe { abdirac_matching_coefficient(h.0, 0, 1, 1e-3, ptr::null_mut()) }, AbdiracStatus::NullPointer);
    assert!(last_error().contains("out"));
    assert_eq!(unsafe { abdirac_system_new(0.3, E, 1.0, f64::NAN, ptr::null_mut()) }, AbdiracStatus::NullPointer);
    assert_eq!(
        unsafe { abdirac_delta_closed(h.0, ptr::null(), 1.0, 0.0, 1.0, &mut a) },
        AbdiracStatus::NullPointer
    );
    assert_eq!(
        unsafe { abdirac_scattering_state(h.0, AbdiracStateKind::Bare, a, a, 1.0, 0.0, ptr::null_mut()) },
        AbdiracStatus::NullPointer
    );
    unsafe { abdirac_system_free(ptr::null_mut()) };
}

#[test]
fn invalid_arguments_leave_outputs_untouched() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { abdirac_system_new(0.3, 0.5, 1.0, f64::NAN, &mut p) }, AbdiracStatus::InvalidArgument);
    assert!(p.is_null());
    assert!(!last_error().is_empty());

    let h = Handle::new(0.3, f64::NAN);
    let sentinel = AbdiracComplex { re: 7.0, im: 7.0 };
    let mut a = sentinel;
    assert_eq!(unsafe { abdirac_matching_coefficient(h.0, 0, 3, 1e-3, &mut a) }, AbdiracStatus::InvalidArgument);
    assert_eq!(a, sentinel);
    // no barrier height was given
    assert_eq!(unsafe { abdirac_shielded_matching(h.0, 0, 1, 1.0, &mut a) }, AbdiracStatus::InvalidArgument);
    assert!(last_error().contains("barrier"));

    let whole = Handle::new(1.0, f64::NAN);
    assert_eq!(unsafe { abdirac_anomalous_limit(whole.0, &mut a) }, AbdiracStatus::InvalidArgument);
    assert_eq!(a, sentinel);
}

#[test]
fn shielded_coefficient_with_barrier() {
    let h = Handle::new(0.3, 1.0);
    let mut a = AbdiracComplex::default();
    assert_eq!(unsafe { abdirac_shielded_matching(h.0, 0, 1, 1e-2, &mut a) }, AbdiracStatus::Ok, "{}", last_error());
    let mut bare = AbdiracComplex::default();
    assert_eq!(unsafe { abdirac_matching_coefficient(h.0, 0, 1, 1e-2, &mut bare) }, AbdiracStatus::Ok);
    assert!(c(a).norm() < c(bare).norm());
}

#[test]
fn scattering_state_has_four_components() {
    let h = Handle::new(0.3, f64::NAN);
    let one = AbdiracComplex { re: 1.0, im: 0.0 };
    let zero = AbdiracComplex::default();
    let mut out = [AbdiracComplex { re: f64::NAN, im: f64::NAN }; 4];
    for kind in [AbdiracStateKind::Shielded, AbdiracStateKind::Bare] {
        let s = unsafe { abdirac_scattering_state(h.0, kind, one, zero, 5.0, 1.0, out.as_mut_ptr()) };
        assert_eq!(s, AbdiracStatus::Ok, "{}", last_error());
        assert!(out.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
    }
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(abdirac_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_entry_point() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/abdirac.h");
    let header = std::fs::read_to_string(path).unwrap();
    for name in [
        "abdirac_version",
        "abdirac_last_error",
        "abdirac_system_new",
        "abdirac_system_free",
        "abdirac_system_wavenumber",
        "abdirac_matching_coefficient",
        "abdirac_matching_limit",
        "abdirac_anomalous_limit",
        "abdirac_shielded_matching",
        "abdirac_scattering_amplitude",
        "abdirac_differential_cross_section",
        "abdirac_scattering_state",
        "abdirac_greens_diff",
        "abdirac_delta_closed",
        "abdirac_delta_quadrature",
        "abdirac_bessel_j",
        "abdirac_hankel1",
        "ABDIRAC_STATUS_NULL_POINTER",
    ] {
        assert!(header.contains(name), "{name}");
    }
    // compile the header when a C compiler is around
    if let Ok(o) = std::process::Command::new("cc").args(["-fsyntax-only", "-Wall", "-xc", path]).output() {
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
}
