//! Structured test functions whose Haar coefficients are known in closed
//! form.
//!
//! Everything is built from one ingredient: an odd smooth atom whose
//! discrete half-line sums are pinned to `1/2` at every dyadic stride
//! ([`build_atom`]).  Placing dilated copies at Haar cell midpoints or
//! left edges then yields coefficient identities that hold to rounding,
//! not just to quadrature order, so the families here give sharp lower
//! bounds for the projection experiments while staying bounded in the
//! smoothness norms:
//!
//! * [`smooth_atom_sum`] — separated copies at freely chosen centers, the
//!   generic building block;
//! * [`tower_function`] — midpoint-centered towers over a frequency
//!   set, one oscillation shift per weight (`tower` family);
//! * [`interval_function`] — edge-centered packet trains over frequency
//!   intervals, together with the matched coefficient set (`interval`
//!   family).
//!
//! Specs serialize to plain `key=value` text so experiment runs can be
//! reproduced from their reports.

pub mod atom;
pub mod error;
pub mod tower;
pub mod interval;
pub mod sums;

pub use atom::{build_atom, Atom, MIN_HALF_SAMPLES};
pub use error::AdversarialError;
pub use tower::{tower_component, tower_function, tower_signs, TowerSpec};
pub use interval::{
    interval_signs, interval_function, interval_packet, IntervalSpec,
};
pub use sums::{indicator_profile_norm, smooth_atom_sum, AtomPlacement};
