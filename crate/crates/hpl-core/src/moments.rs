//! Least-norm correction of discrete moments.
//!
//! Sampled smooth profiles have continuum moments that vanish analytically
//! but discrete moments that only vanish to quadrature order. The filter
//! lemmas and atom identities downstream need the *discrete* moments to be
//! zero, so after sampling we subtract the minimum-norm perturbation that
//! kills the requested moments exactly:
//!
//! ```text
//! V d = r,  d* = V^T (V V^T)^{-1} r,  values -= d*
//! ```
//!
//! with `V_{nu,m} = t_m^{nu}` the Vandermonde rows over the (normalized)
//! abscissae. The Gram matrix is tiny (orders <= 9), solved by Gaussian
//! elimination with partial pivoting; a degenerate pivot reports an
//! ill-conditioning diagnostic instead of silently producing garbage.

use crate::error::CoreError;

/// Solve the square system in place; returns the pivot ratio
/// `min|pivot| / max|pivot|` as a conditioning certificate.
fn solve_in_place(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<f64, CoreError> {
    let n = b.len();
    let mut min_piv = f64::INFINITY;
    let mut max_piv: f64 = 0.0;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let pivot = a[col][col];
        min_piv = min_piv.min(pivot.abs());
        max_piv = max_piv.max(pivot.abs());
        if pivot == 0.0 {
            return Err(CoreError::IllConditionedMoments { pivot_ratio: 0.0 });
        }
        for row in col + 1..n {
            let factor = a[row][col] / pivot;
            if factor != 0.0 {
                for k in col..n {
                    a[row][k] -= factor * a[col][k];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    for col in (0..n).rev() {
        b[col] /= a[col][col];
        for row in 0..col {
            b[row] -= a[row][col] * b[col];
        }
    }
    let ratio = min_piv / max_piv;
    if ratio < 1e-13 {
        return Err(CoreError::IllConditionedMoments { pivot_ratio: ratio });
    }
    Ok(ratio)
}

/// Discrete moment of `values` of order `nu` over `abscissae` (no cell
/// width factor; callers scale as needed).
pub fn discrete_moment(values: &[f64], abscissae: &[f64], nu: usize) -> f64 {
    let terms: Vec<f64> = values
        .iter()
        .zip(abscissae)
        .map(|(&v, &t)| v * t.powi(nu as i32))
        .collect();
    crate::grid::dyadic_sum(&terms)
}

/// Subtract the least-norm perturbation making all `orders` moments vanish.
/// Returns the largest absolute residual moment after correction.
///
/// `abscissae` should be normalized to O(1) (e.g. support-scaled) so the
/// Vandermonde Gram stays well conditioned for orders up to ~9.
pub fn zero_discrete_moments(
    values: &mut [f64],
    abscissae: &[f64],
    orders: &[usize],
) -> Result<f64, CoreError> {
    assert_eq!(values.len(), abscissae.len());
    let k = orders.len();
    if k == 0 {
        return Ok(0.0);
    }
    let m = values.len();
    let gram_template = {
        let mut gram = vec![vec![0.0f64; k]; k];
        for (i, &nu_i) in orders.iter().enumerate() {
            for (j, &nu_j) in orders.iter().enumerate() {
                let terms: Vec<f64> = abscissae
                    .iter()
                    .map(|&t| t.powi((nu_i + nu_j) as i32))
                    .collect();
                gram[i][j] = crate::grid::dyadic_sum(&terms);
            }
        }
        gram
    };
    // Iterative refinement: each pass absorbs the rounding of the last,
    // bringing residual moments down to the eps floor of the summation
    // itself (which grows slowly with the sample count).
    let mut resid = 0.0;
    for _ in 0..3 {
        let mut r: Vec<f64> = orders
            .iter()
            .map(|&nu| discrete_moment(values, abscissae, nu))
            .collect();
        let mut gram = gram_template.clone();
        solve_in_place(&mut gram, &mut r)?;
        // values -= V^T lambda
        for (mi, v) in values.iter_mut().enumerate().take(m) {
            let t = abscissae[mi];
            let mut corr = 0.0;
            for (i, &nu) in orders.iter().enumerate() {
                corr += r[i] * t.powi(nu as i32);
            }
            *v -= corr;
        }
        resid = orders
            .iter()
            .map(|&nu| discrete_moment(values, abscissae, nu).abs())
            .fold(0.0f64, f64::max);
        if resid <= 1e-15 {
            break;
        }
    }
    Ok(resid)
}

/// Subtract the least-norm perturbation enforcing general linear
/// constraints `rows[i] . values = targets[i]`.  Same Gram machinery as
/// [`zero_discrete_moments`] but with caller-supplied rows (moment rows,
/// stride-sum rows, or any mix).  Returns the largest absolute residual
/// `|rows[i] . values - targets[i]|` after correction.
///
/// Rows should be scaled to comparable magnitudes so the Gram stays well
/// conditioned.
pub fn enforce_linear_constraints(
    values: &mut [f64],
    rows: &[Vec<f64>],
    targets: &[f64],
) -> Result<f64, CoreError> {
    assert_eq!(rows.len(), targets.len());
    let k = rows.len();
    if k == 0 {
        return Ok(0.0);
    }
    for row in rows {
        assert_eq!(row.len(), values.len());
    }
    let apply = |values: &[f64], row: &[f64]| -> f64 {
        let terms: Vec<f64> = values.iter().zip(row).map(|(&v, &c)| v * c).collect();
        crate::grid::dyadic_sum(&terms)
    };
    let gram_template = {
        let mut gram = vec![vec![0.0f64; k]; k];
        for i in 0..k {
            for j in i..k {
                let g = apply(&rows[i], &rows[j]);
                gram[i][j] = g;
                gram[j][i] = g;
            }
        }
        gram
    };
    let mut resid = 0.0;
    for _ in 0..3 {
        let mut r: Vec<f64> = rows
            .iter()
            .zip(targets)
            .map(|(row, &t)| apply(values, row) - t)
            .collect();
        let mut gram = gram_template.clone();
        solve_in_place(&mut gram, &mut r)?;
        for (i, row) in rows.iter().enumerate() {
            let lambda = r[i];
            if lambda != 0.0 {
                for (v, &c) in values.iter_mut().zip(row) {
                    *v -= lambda * c;
                }
            }
        }
        resid = rows
            .iter()
            .zip(targets)
            .map(|(row, &t)| (apply(values, row) - t).abs())
            .fold(0.0f64, f64::max);
        if resid <= 1e-15 {
            break;
        }
    }
    Ok(resid)
}
