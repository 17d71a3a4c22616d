use hpl_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FilterError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("unsupported mother support radius {value}; pick 0.5 or 0.0625")]
    UnsupportedRadius { value: f64 },

    #[error("scale-0 kernel has only {taps} taps; need at least {min} (raise the grid resolution)")]
    ResolutionTooCoarse { taps: usize, min: usize },

    #[error("vanishing-moment order m1 = {m1} exceeds the supported maximum {max}")]
    SmoothnessOrderTooHigh { m1: usize, max: usize },

    #[error("scale k = {k} is not resolvable on this bank (max usable scale {max_scale})")]
    ScaleUnresolvable { k: i32, max_scale: u32 },

    #[error("parameter `{name}` = {value} out of range; need a finite value strictly above 1")]
    ParamOutOfRange { name: &'static str, value: f64 },

    #[error("smoothness s = {s} too large for m1 = {m1}; need m1 + 1 > |s|")]
    SmoothnessMismatch { s: f64, m1: usize },

    #[error("mother profile degenerated to zero while normalizing")]
    DegenerateProfile,

    #[error("calibration failed: {detail}")]
    CalibrationFailed { detail: String },
}
