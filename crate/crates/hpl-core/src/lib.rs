//! Dyadic grids and exact Haar algebra.
//!
//! Everything downstream leans on two properties of this crate:
//!
//! * summation follows the dyadic block structure of the grid (splits only at
//!   power-of-two boundaries), so the fast coefficient cascade reproduces
//!   naive inner products bit for bit;
//! * Haar samples are exact `±1.0` / `0.0` floats on exact dyadic cells, so
//!   orthogonality and normalization hold to the last ulp, not just to a
//!   tolerance.
//!
//! On top of the grid layer sit the Haar transform (analysis, synthesis,
//! plain and signed projections), the discretized sequence-space norm, and
//! the frequency-density statistics used by the experiment drivers.

pub mod bump;
pub mod density;
pub mod error;
pub mod grid;
pub mod haar;
pub mod moments;
pub mod seqnorm;

pub use error::CoreError;
pub use grid::{
    dyadic_sum, inner_product, lp_norm, pow2, DyadicGrid, SampledFunction, MAX_GRID_POINTS,
    MAX_J_MAX, MAX_WINDOW_ABS, MIN_J_MAX,
};
pub use haar::{
    analyze, analyze_subset, project, sample_haar, signed_project, split_by_sign, synthesize,
    HaarCoefficients, HaarIndex, HaarSubset, SignAssignment,
};
pub use seqnorm::sequence_norm;
