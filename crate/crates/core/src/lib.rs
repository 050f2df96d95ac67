//! Dirac partial waves for electrons near bare and shielded magnetic strings.

// `!(x > 0.0)` is how parameter checks reject NaN; tabulated constants keep
// the digits they were computed to.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bare_tube;
pub mod cli;
pub mod error;
pub mod extrapolate;
pub mod model;
pub mod ode;
pub mod propagate;
pub mod quadrature;
pub mod scattering;
pub mod shielded;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub(crate) fn serialize_complex<S: serde::Serializer>(v: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&v.re)?;
    t.serialize_element(&v.im)?;
    t.end()
}

pub(crate) fn serialize_complex_array<S: serde::Serializer, const N: usize>(
    v: &[Complex64; N],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(N))?;
    for c in v {
        seq.serialize_element(&[c.re, c.im])?;
    }
    seq.end()
}
