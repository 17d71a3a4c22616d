//! Growth-curve experiment: measure the projection-norm lower bound
//! against the ladder parameter `N`, fit the log2 growth rate, and compare
//! with the predicted exponent for the configured `(p, q, s)`.

use std::fmt::Write as _;

use hpl_core::density::density_stats;
use hpl_core::{DyadicGrid, HaarSubset};
use hpl_filters::{build_filter_bank, TLParams};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, SetBuilder};
use crate::error::ExperimentError;
use crate::estimator::{derive_seed, estimate_projection_norm_lb};
use crate::fit::{fit_slope, FitResult};
use crate::regime::{predicted_exponent, PredictedExponent};

/// Grid resolution when the config leaves `j_max` on auto.
pub const DEFAULT_J_MAX: u32 = 14;
/// Minimum fit quality before a polynomial-regime verdict is issued.
pub const R2_FLOOR: f64 = 0.9;
/// Rows on grids above this many points run serially (memory pressure).
const PARALLEL_POINT_LIMIT: u64 = 1 << 20;
/// Seed stream for per-row derivation.
const ROW_STREAM: u64 = 0x526f;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Inconclusive,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// One measured point of a growth curve.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub n: u32,
    /// Nominal cardinality target `2^N`.
    pub lambda: u64,
    /// Human-readable description of the level set (no commas).
    pub set_desc: String,
    /// Worst-case window count of the frequency set.
    pub z_upper: usize,
    /// Best-case window count of the frequency set.
    pub z_lower: usize,
    /// Estimated projection-norm lower bound.
    pub gamma_hat: f64,
    /// Family of the winning candidate.
    pub family: String,
    /// Seed of the winning draw.
    pub seed: u64,
    /// Whether resolution capped the level count below `2^N`.
    pub capped: bool,
    pub j_max: u32,
}

/// A full growth experiment: config, per-`N` rows, fit, and verdict.
#[derive(Clone, Debug)]
pub struct GrowthReport {
    pub config: ExperimentConfig,
    pub rows: Vec<GrowthRow>,
    pub fit: Option<FitResult>,
    pub predicted: PredictedExponent,
    pub verdict: Verdict,
}

/// Build the level set for row `N`. Returns the levels and whether the
/// resolution cap reduced the count below the nominal `2^N`.
pub fn build_level_set(
    builder: &SetBuilder,
    n: u32,
    j_max: u32,
) -> Result<(Vec<u32>, bool), ExperimentError> {
    let top = j_max.checked_sub(5).ok_or(ExperimentError::ConfigInvalid {
        key: "j_max",
        detail: format!("grid j_max = {j_max} leaves no usable levels"),
    })?;
    let nominal = 1u64 << n.min(63);
    match builder {
        SetBuilder::FullRange => {
            let count = nominal.min(top as u64 + 1) as u32;
            let levels: Vec<u32> = (0..count).collect();
            Ok((levels, (count as u64) < nominal))
        }
        SetBuilder::Separated => {
            if n == 0 {
                return Err(ExperimentError::ConfigInvalid {
                    key: "n_lo",
                    detail: "separated sets need N >= 1".into(),
                });
            }
            let levels: Vec<u32> = (0..=top / n).map(|m| m * n).collect();
            let capped = (levels.len() as u64) < nominal;
            Ok((levels, capped))
        }
        SetBuilder::Custom(levels) => {
            for &l in levels {
                if l > j_max - 1 {
                    return Err(ExperimentError::ConfigInvalid {
                        key: "set",
                        detail: format!("custom level {l} exceeds j_max - 1 = {}", j_max - 1),
                    });
                }
            }
            let mut sorted = levels.clone();
            sorted.sort_unstable();
            sorted.dedup();
            Ok((sorted, false))
        }
    }
}

fn describe_set(builder: &SetBuilder, levels: &[u32], capped: bool) -> String {
    let body = match builder {
        SetBuilder::FullRange => format!(
            "full:{}..{}",
            levels.first().copied().unwrap_or(0),
            levels.last().copied().unwrap_or(0)
        ),
        SetBuilder::Separated | SetBuilder::Custom(_) => {
            let tag = if matches!(builder, SetBuilder::Separated) {
                "sep"
            } else {
                "custom"
            };
            let list: Vec<String> = levels.iter().map(|l| l.to_string()).collect();
            format!("{tag}:{}", list.join("+"))
        }
    };
    if capped {
        format!("{body}(capped)")
    } else {
        body
    }
}

/// Run one row: build the level set and index set, derive the row seed,
/// and estimate the projection-norm lower bound.
pub(crate) fn run_growth_row(
    config: &ExperimentConfig,
    n: u32,
) -> Result<GrowthRow, ExperimentError> {
    let j = config.j_max.unwrap_or(DEFAULT_J_MAX);
    let depth = config.ladder_depth.unwrap_or(n);
    if depth > j.saturating_sub(6) {
        return Err(ExperimentError::ResolutionOverflow {
            j_max: j,
            n: depth,
            n_max: j.saturating_sub(6),
        });
    }
    let (levels, capped) = build_level_set(&config.set_builder, n, j)?;
    let grid = DyadicGrid::new(j, -1, 2)?;
    let bank = build_filter_bank(grid, config.m1, config.support_radius)?;
    let params = TLParams::new(config.p(), config.q(), config.s(), config.k_max)?;
    let e = HaarSubset::full_levels(&levels);
    let mut row_cfg = config.clone();
    row_cfg.ladder_depth = Some(depth);
    row_cfg.seed = derive_seed(config.seed, ROW_STREAM, n as u64);
    let outcome = estimate_projection_norm_lb(&e, &params, &row_cfg, &bank)?;
    let stats = density_stats(&e.frequencies())?;
    Ok(GrowthRow {
        n,
        lambda: 1u64 << n.min(63),
        set_desc: describe_set(&config.set_builder, &levels, capped),
        z_upper: stats.upper,
        z_lower: stats.lower,
        gamma_hat: outcome.value,
        family: outcome.family,
        seed: outcome.seed,
        capped,
        j_max: j,
    })
}

fn fit_rows(rows: &[GrowthRow]) -> Result<Option<FitResult>, ExperimentError> {
    if rows.len() < 3 {
        return Err(ExperimentError::FitUnderdetermined {
            got: rows.len(),
            want: 3,
        });
    }
    if rows.iter().any(|r| !(r.gamma_hat > 0.0)) {
        return Ok(None);
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.n as f64, r.gamma_hat.log2()))
        .collect();
    Ok(Some(fit_slope(&points)?))
}

pub(crate) fn decide_verdict(
    predicted: &PredictedExponent,
    fit: Option<&FitResult>,
    tol: f64,
) -> Verdict {
    let Some(fit) = fit else {
        return Verdict::Inconclusive;
    };
    match predicted {
        PredictedExponent::LogRegime | PredictedExponent::Infinite => Verdict::Inconclusive,
        PredictedExponent::Polynomial(v) if *v == 0.0 => {
            // Boundedness predicts a flat curve; scatter around flat is
            // exactly what bounded norms look like, so r2 carries no
            // information here.
            if fit.slope.abs() <= tol {
                Verdict::Consistent
            } else {
                Verdict::Inconsistent
            }
        }
        PredictedExponent::Polynomial(v) => {
            if fit.r2 < R2_FLOOR {
                Verdict::Inconclusive
            } else if (fit.slope - v).abs() <= tol {
                Verdict::Consistent
            } else {
                Verdict::Inconsistent
            }
        }
    }
}

/// Measure the growth curve over `N = n_lo..=n_hi` and fit the rate.
/// Rows are independent and run in parallel on small grids.
pub fn growth_curve(config: &ExperimentConfig) -> Result<GrowthReport, ExperimentError> {
    config.validate()?;
    let j = config.j_max.unwrap_or(DEFAULT_J_MAX);
    let ns: Vec<u32> = (config.n_lo..=config.n_hi).collect();
    let points = 3u64 << j; // window [-1, 2]
    let rows: Vec<GrowthRow> = if points <= PARALLEL_POINT_LIMIT {
        ns.par_iter()
            .map(|&n| run_growth_row(config, n))
            .collect::<Result<_, _>>()?
    } else {
        ns.iter()
            .map(|&n| run_growth_row(config, n))
            .collect::<Result<_, _>>()?
    };
    let fit = fit_rows(&rows)?;
    let predicted = predicted_exponent(config.p(), config.q(), config.s())?;
    let verdict = decide_verdict(&predicted, fit.as_ref(), config.slope_tol);
    Ok(GrowthReport {
        config: config.clone(),
        rows,
        fit,
        predicted,
        verdict,
    })
}

impl GrowthReport {
    /// CSV form: the resolved config as `# key = value` comments, one row
    /// per `N`, and a trailing summary line. Bit-stable for fixed seeds.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in self.config.to_kv().lines() {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(out, "N,lambda,set_desc,z_bar,z_under,gamma_hat,family,seed");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.n, r.lambda, r.set_desc, r.z_upper, r.z_lower, r.gamma_hat, r.family, r.seed
            );
        }
        let _ = writeln!(out, "slope,intercept,r2,predicted,verdict");
        match &self.fit {
            Some(fit) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    fit.slope,
                    fit.intercept,
                    fit.r2,
                    self.predicted.label(),
                    self.verdict.label()
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "nan,nan,nan,{},{}",
                    self.predicted.label(),
                    self.verdict.label()
                );
            }
        }
        out
    }
}

/// Recover the fully resolved config embedded in a report's `#` comments.
pub fn config_from_report(text: &str) -> Result<ExperimentConfig, ExperimentError> {
    let mut cfg_text = String::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix('#') {
            cfg_text.push_str(rest.trim_start());
            cfg_text.push('\n');
        }
    }
    if cfg_text.is_empty() {
        return Err(ExperimentError::ReportMalformed {
            detail: "no embedded config comments found".into(),
        });
    }
    ExperimentConfig::from_kv(&cfg_text)
}
