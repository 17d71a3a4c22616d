//! Endpoint contrast experiment: at the smoothness endpoint `s = 1/q - 1`
//! the growth rate of the projection-norm bound depends on how the active
//! levels are spaced, not just how many there are. This module measures a
//! dense (full-range) curve against a separated curve and reports the
//! ratio trend.

use std::fmt::Write as _;

use crate::config::{CandidateFamily, ExperimentConfig, SetBuilder};
use crate::error::ExperimentError;
use crate::fit::{fit_slope, FitResult};
use crate::growth::{run_growth_row, GrowthRow, Verdict, DEFAULT_J_MAX};

/// Minimum fit quality for the separated-side trend.
pub const SEP_R2_FLOOR: f64 = 0.8;
/// Multiplicative slack when checking that ratios increase with `N`.
const MONOTONE_SLACK: f64 = 0.95;

/// One contrast point: both side estimates at the same `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContrastRow {
    pub n: u32,
    pub gamma_full: f64,
    pub gamma_sep: f64,
    /// `gamma_full / gamma_sep`.
    pub ratio: f64,
    pub full_desc: String,
    pub sep_desc: String,
}

#[derive(Clone, Debug)]
pub struct ContrastReport {
    /// Resolved configuration (smoothness forced to the endpoint).
    pub config: ExperimentConfig,
    pub rows: Vec<ContrastRow>,
    /// `ratio(n_hi) / ratio(n_lo)`; the predicted value is
    /// `(n_hi / n_lo)^{1/q}`.
    pub ratio_of_ratios: f64,
    /// Fit of `log2 gamma_sep` against `log2 N`; the predicted slope is
    /// `1 - 1/q`.
    pub sep_fit: Option<FitResult>,
    pub verdict: Verdict,
}

fn side_row(
    cfg: &ExperimentConfig,
    n: u32,
    j: u32,
    set_builder: SetBuilder,
    family: CandidateFamily,
) -> Result<GrowthRow, ExperimentError> {
    let mut side = cfg.clone();
    side.j_max = Some(j);
    side.set_builder = set_builder;
    side.families = vec![family];
    side.ladder_depth = Some(n);
    run_growth_row(&side, n)
}

/// Run the endpoint contrast for `q < p` over `N = n_lo..=n_hi`.
///
/// The smoothness is forced to `s = 1/q - 1` regardless of what `base`
/// carries; `base` supplies the operational knobs (samples, seed,
/// resolution, filter parameters). The full-range side estimates with the
/// adjacent-interval packet family on a grid deep enough for an `N`-level
/// packet; the separated side estimates with the equal-weight tower family
/// on the base grid.
pub fn endpoint_contrast(
    p: f64,
    q: f64,
    n_lo: u32,
    n_hi: u32,
    base: &ExperimentConfig,
) -> Result<ContrastReport, ExperimentError> {
    if !(q < p) {
        return Err(ExperimentError::ConfigInvalid {
            key: "q",
            detail: format!("contrast needs q < p, got p = {p}, q = {q}"),
        });
    }
    if n_lo > n_hi {
        return Err(ExperimentError::ConfigInvalid {
            key: "n_lo",
            detail: format!("n_lo = {n_lo} exceeds n_hi = {n_hi}"),
        });
    }
    let s = 1.0 / q - 1.0;
    let mut cfg = ExperimentConfig::new(p, q, s)?;
    cfg.n_lo = n_lo;
    cfg.n_hi = n_hi;
    cfg.samples = base.samples;
    cfg.seed = base.seed;
    cfg.j_max = base.j_max;
    cfg.m1 = base.m1;
    cfg.support_radius = base.support_radius;
    cfg.k_max = base.k_max;
    cfg.slope_tol = base.slope_tol;
    cfg.validate()?;

    let base_j = cfg.j_max.unwrap_or(DEFAULT_J_MAX);
    let mut rows = Vec::with_capacity((n_hi - n_lo + 1) as usize);
    for n in n_lo..=n_hi {
        // A packet spanning n adjacent levels needs dilation headroom
        // ~2n below the finest resolvable scale.
        let j_full = base_j.max(2 * n + 6);
        let full = side_row(&cfg, n, j_full, SetBuilder::FullRange, CandidateFamily::Interval)?;
        let sep = side_row(&cfg, n, base_j, SetBuilder::Separated, CandidateFamily::Tower)?;
        if !(sep.gamma_hat > 0.0) || !(full.gamma_hat > 0.0) {
            return Err(ExperimentError::DegenerateInput {
                detail: format!("contrast row N = {n} produced a non-positive estimate"),
            });
        }
        rows.push(ContrastRow {
            n,
            gamma_full: full.gamma_hat,
            gamma_sep: sep.gamma_hat,
            ratio: full.gamma_hat / sep.gamma_hat,
            full_desc: full.set_desc,
            sep_desc: sep.set_desc,
        });
    }

    let ratio_of_ratios = rows.last().map(|r| r.ratio).unwrap_or(f64::NAN)
        / rows.first().map(|r| r.ratio).unwrap_or(f64::NAN);
    let sep_fit = if rows.len() >= 3 {
        let points: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| ((r.n as f64).log2(), r.gamma_sep.log2()))
            .collect();
        Some(fit_slope(&points)?)
    } else {
        None
    };

    let increasing = rows
        .windows(2)
        .all(|w| w[1].ratio >= w[0].ratio * MONOTONE_SLACK);
    let verdict = match &sep_fit {
        None => Verdict::Inconclusive,
        Some(fit) if fit.r2 < SEP_R2_FLOOR => Verdict::Inconclusive,
        Some(_) => {
            if increasing && (1.0..=2.0).contains(&ratio_of_ratios) {
                Verdict::Consistent
            } else {
                Verdict::Inconsistent
            }
        }
    };

    Ok(ContrastReport {
        config: cfg,
        rows,
        ratio_of_ratios,
        sep_fit,
        verdict,
    })
}

impl ContrastReport {
    /// CSV form mirroring the growth report layout: embedded config, one
    /// row per `N`, and a summary line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in self.config.to_kv().lines() {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(out, "N,gamma_full,gamma_sep,ratio");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.n, r.gamma_full, r.gamma_sep, r.ratio);
        }
        let _ = writeln!(out, "ratio_of_ratios,sep_slope,sep_r2,verdict");
        match &self.sep_fit {
            Some(fit) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    self.ratio_of_ratios,
                    fit.slope,
                    fit.r2,
                    self.verdict.label()
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "{},nan,nan,{}",
                    self.ratio_of_ratios,
                    self.verdict.label()
                );
            }
        }
        out
    }
}
