//! Experiment drivers: regime classification, projection-norm estimation,
//! growth curves over ladder size, endpoint contrasts, and norm-equivalence
//! surveys, with flat-text configs and CSV reports built for bit-exact
//! reproducibility.

pub mod acceptance;
mod config;
mod contrast;
mod equivalence;
mod error;
mod estimator;
mod fit;
mod growth;
mod regime;

pub use config::{CandidateFamily, ExperimentConfig, SetBuilder};
pub use contrast::{endpoint_contrast, ContrastReport, ContrastRow, SEP_R2_FLOOR};
pub use equivalence::{equivalence_ratio, RatioStats};
pub use error::ExperimentError;
pub use estimator::{brute_force_ratio, estimate_projection_norm_lb, EstimatorOutcome};
pub use fit::{fit_slope, FitResult};
pub use growth::{
    build_level_set, config_from_report, growth_curve, GrowthReport, GrowthRow, Verdict,
    DEFAULT_J_MAX, R2_FLOOR,
};
pub use regime::{classify_regime, predicted_exponent, PredictedExponent, Regime};
