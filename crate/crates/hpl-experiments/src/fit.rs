//! Ordinary least-squares line fitting for the growth curves.

use crate::error::ExperimentError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Fit `y = slope * x + intercept` by least squares. Points must be finite
/// with at least two distinct abscissae. A corpus with zero vertical
/// variance lies exactly on the fitted horizontal line, so `r2 = 1`.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<FitResult, ExperimentError> {
    if points.len() < 2 {
        return Err(ExperimentError::FitUnderdetermined {
            got: points.len(),
            want: 2,
        });
    }
    for &(x, y) in points {
        if !(x.is_finite() && y.is_finite()) {
            return Err(ExperimentError::FitDegenerate {
                detail: format!("non-finite point ({x}, {y})"),
            });
        }
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let x_scale: f64 = points.iter().map(|p| p.0.abs()).fold(1.0, f64::max);
    if sxx <= 1e-24 * x_scale * x_scale {
        return Err(ExperimentError::FitDegenerate {
            detail: "all abscissae coincide".into(),
        });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum();
    let r2 = if ss_tot <= 1e-30 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(FitResult {
        slope,
        intercept,
        r2,
    })
}
