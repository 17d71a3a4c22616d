//! Discretized sequence-space norm on Haar coefficients.
//!
//! For coefficients `{c_{j,mu}}` the norm is
//!
//! ```text
//! || ( sum_j 2^{jsq} | sum_mu c_{j,mu} 1_{j,mu} |^q )^{1/q} ||_{L^p}
//! ```
//!
//! evaluated cell by cell on the grid. Translates at one level have
//! disjoint supports, so the inner sum has at most one active term per
//! cell and the accumulation is a single sparse pass over the entries.

use crate::error::CoreError;
use crate::grid::{dyadic_sum, SampledFunction};
use crate::haar::HaarCoefficients;

fn check_exponent(name: &'static str, v: f64) -> Result<(), CoreError> {
    if !v.is_finite() || v < 1.0 {
        return Err(CoreError::InvalidExponent { name, value: v });
    }
    Ok(())
}

/// Evaluate the sequence norm with integrability `p`, summability `q`, and
/// smoothness `s`. Empty coefficient sets have norm zero.
///
/// A single unit coefficient at level `j >= 0` gives exactly
/// `2^{j(s - 1/p)}` (up to `powf` rounding), which the contract tests pin.
pub fn sequence_norm(
    coeffs: &HaarCoefficients,
    p: f64,
    q: f64,
    s: f64,
) -> Result<f64, CoreError> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    if !s.is_finite() {
        return Err(CoreError::InvalidExponent { name: "s", value: s });
    }
    if coeffs.is_empty() {
        return Ok(0.0);
    }
    let grid = coeffs.grid();
    // w[i] accumulates sum_j 2^{jsq} |G_j(x_i)|^q  (G_j piecewise constant).
    let mut w = vec![0.0f64; grid.n_points()];
    for (idx, &c) in coeffs.iter() {
        let weight = (2.0f64).powf(idx.j as f64 * s * q) * c.abs().powf(q);
        let (start, _, len) = idx.cell_range(grid).expect("validated at insertion");
        for x in &mut w[start..start + len] {
            *x += weight;
        }
    }
    let holder = SampledFunction::from_values(grid, w)?;
    let v = holder.values();
    let pq = p / q;
    let total = if pq == 1.0 {
        dyadic_sum(v)
    } else {
        let powed: Vec<f64> = v.iter().map(|x| x.powf(pq)).collect();
        dyadic_sum(&powed)
    };
    Ok((total * grid.delta()).powf(1.0 / p))
}
