//! Zigzag edge states of honeycomb structures.
//!
//! * [`lattice`]: geometry of the zigzag frame and the per-kpar scalars ζ, δ_gap, δ_max.
//! * [`tightbinding`]: the discrete edge operator, its spectra, flat-band state and resolvent.
//! * [`zak`]: Bloch modes of the bulk fiber and their Zak phase.
//! * [`atomic`]: the single-site well, its ground state and the hopping coefficient ρ.
//! * [`continuum`]: the continuum edge operator on a truncated cylinder and its scaled spectrum.
//! * [`cli`]: the `zigzag` command-line front end.

pub mod atomic;
pub mod cli;
pub mod continuum;
pub mod dense;
pub mod lattice;
pub mod quadrature;
pub mod tightbinding;
pub mod verify;
pub mod zak;

use num_complex::Complex64;

pub(crate) fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}
