use hpl_adversarial::AdversarialError;
use hpl_core::CoreError;
use hpl_filters::FilterError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Adversarial(#[from] AdversarialError),
    #[error("configuration key {key:?} invalid: {detail}")]
    ConfigInvalid { key: &'static str, detail: String },
    #[error("config text line {line}: {detail}")]
    ConfigMalformed { line: usize, detail: String },
    #[error("degenerate input: {detail}")]
    DegenerateInput { detail: String },
    #[error("need at least {want} points to fit, got {got}")]
    FitUnderdetermined { got: usize, want: usize },
    #[error("cannot fit a slope: {detail}")]
    FitDegenerate { detail: String },
    #[error("grid j_max = {j_max} cannot resolve depth {n}; max feasible depth is {n_max}")]
    ResolutionOverflow { j_max: u32, n: u32, n_max: u32 },
    #[error("report text malformed: {detail}")]
    ReportMalformed { detail: String },
}
