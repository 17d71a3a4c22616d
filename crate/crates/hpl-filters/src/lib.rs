//! Band decomposition on dyadic grids and the surrogate smoothness norm.
//!
//! A [`FilterBank`] carries a low-pass kernel and a ladder of band kernels
//! built from derivatives of the standard bump. Three properties are
//! engineered in, not approximated:
//!
//! * every band kernel's *discrete* moments vanish exactly (least-norm
//!   corrected at each scale), so filtering anything locally constant
//!   cancels to the rounding floor;
//! * each scale samples the same dimensionless profile, so filtered fields
//!   are exactly scale-covariant at aligned grid points;
//! * small kernels convolve by direct sliding dot products in a fixed
//!   order, so those cancellations actually survive evaluation (large
//!   kernels switch to FFT for speed, cross-checked against the direct
//!   path).
//!
//! On top sit the truncated smoothness norm ([`FilterBank::f_norm`]) and
//! the component operators of the filtered-projection expansion.

mod bank;
mod convolve;
mod decompose;
mod error;
mod kernel;
mod norm;

pub use bank::{build_filter_bank, convolve_direct_for_tests, Calibration, FilterBank, FourierCheck};
pub use convolve::DIRECT_TAP_LIMIT;
pub use error::FilterError;
pub use kernel::{MAX_M1, MIN_BASE_TAPS, MIN_KERNEL_TAPS};
pub use norm::{FNormBreakdown, TLParams};
