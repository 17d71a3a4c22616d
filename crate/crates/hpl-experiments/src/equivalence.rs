//! Two-sided comparison of the discrete sequence norm against the
//! filter-bank function norm over a corpus of sampled functions.

use hpl_core::{analyze, SampledFunction};
use hpl_filters::{FilterBank, TLParams};

use crate::error::ExperimentError;

/// Min/max of the per-function ratio `sequence_norm / f_norm` over a
/// corpus, plus the spread `max / min`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioStats {
    pub min: f64,
    pub max: f64,
    /// `max / min`; 1.0 means the two norms agree up to a constant factor
    /// on this corpus.
    pub spread: f64,
    pub per_function: Vec<f64>,
}

/// Measure the equivalence ratio for each corpus member. The analysis
/// window runs from the coarse mean level `-1` up to the finest level the
/// grid resolves.
pub fn equivalence_ratio(
    corpus: &[SampledFunction],
    params: &TLParams,
    bank: &FilterBank,
) -> Result<RatioStats, ExperimentError> {
    if corpus.is_empty() {
        return Err(ExperimentError::DegenerateInput {
            detail: "equivalence corpus is empty".into(),
        });
    }
    let mut per_function = Vec::with_capacity(corpus.len());
    for (i, f) in corpus.iter().enumerate() {
        let j_max = f.grid().j_max();
        let levels: Vec<i32> = (-1..=j_max as i32 - 1).collect();
        let coeffs = analyze(f, &levels)?;
        let seq = hpl_core::sequence_norm(&coeffs, params.p, params.q, params.s)?;
        let fun = bank.f_norm(f, params)?.value;
        if !(fun > 0.0) || !fun.is_finite() {
            return Err(ExperimentError::DegenerateInput {
                detail: format!("corpus member {i} has zero or non-finite function norm"),
            });
        }
        per_function.push(seq / fun);
    }
    let min = per_function.iter().copied().fold(f64::INFINITY, f64::min);
    let max = per_function
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(RatioStats {
        min,
        max,
        spread: max / min,
        per_function,
    })
}
