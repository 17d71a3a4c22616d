//! Sampled convolution kernels with exact discrete moments.
//!
//! A kernel at scale `k` holds `n` taps at consecutive cell centers; tap
//! `m` sits at x-offset `(2m + 1 - n) * delta / 2` from the evaluation
//! point, so the tap set is exactly symmetric about zero. Band kernels
//! are derivative-of-bump profiles, normalized to unit peak, with their
//! *discrete* moments up to `m1` removed exactly by least-norm correction
//! and then scaled by `2^k`. The low-pass kernel is the bump itself with
//! exact discrete unit mass.
//!
//! Each scale samples the same dimensionless profile at spacing
//! `2^k * delta`, which is the identical sample set a scale-0 kernel sees
//! on a grid coarsened by `k` levels. That makes filtered fields exactly
//! scale-covariant at aligned points — a property the tests pin down.

use hpl_core::bump::BumpDerivative;
use hpl_core::moments::zero_discrete_moments;
use hpl_core::{dyadic_sum, pow2, DyadicGrid};

use crate::error::FilterError;

/// Minimum taps for any usable kernel.
pub const MIN_KERNEL_TAPS: usize = 16;
/// Minimum taps for the scale-0 kernels of a bank.
pub const MIN_BASE_TAPS: usize = 64;
/// Largest supported vanishing-moment order.
pub const MAX_M1: usize = 8;

#[derive(Clone, Debug)]
pub(crate) struct Kernel {
    /// Tap values, including the `2^k` amplitude for band kernels.
    pub taps: Vec<f64>,
    /// Largest dimensionless moment residual left after correction.
    pub moment_resid: f64,
}

/// Dimensionless tap abscissae `xi_m = (2m + 1 - n) * 2^(k - j_max - 1) / r`
/// for a kernel of `n` taps at scale `k`; `r = 2^radius_log2`.
fn abscissae(n: usize, k: i32, j_max: u32, radius_log2: i32) -> Vec<f64> {
    let scale = pow2(k - j_max as i32 - 1 - radius_log2);
    (0..n)
        .map(|m| (2 * m as i64 + 1 - n as i64) as f64 * scale)
        .collect()
}

/// Tap count for scale `k`: `2 r 2^(j_max - k + 1)` as an exact power of two.
pub(crate) fn tap_count(k: i32, j_max: u32, radius_log2: i32) -> Option<usize> {
    let e = j_max as i32 - k + 1 + radius_log2;
    (0..=(usize::BITS as i32 - 2)).contains(&e).then(|| 1usize << e)
}

pub(crate) fn build_band_kernel(
    grid: DyadicGrid,
    k: i32,
    m1: usize,
    radius_log2: i32,
    profile: &BumpDerivative,
) -> Result<Kernel, FilterError> {
    let n = tap_count(k, grid.j_max(), radius_log2).filter(|&n| n >= MIN_KERNEL_TAPS);
    let Some(n) = n else {
        return Err(FilterError::ScaleUnresolvable {
            k,
            max_scale: max_scale(grid, radius_log2),
        });
    };
    let xi = abscissae(n, k, grid.j_max(), radius_log2);
    let mut vals: Vec<f64> = xi.iter().map(|&u| profile.eval(u)).collect();
    let peak = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Err(FilterError::DegenerateProfile);
    }
    let inv = 1.0 / peak;
    for v in &mut vals {
        *v *= inv;
    }
    let orders: Vec<usize> = (0..=m1).collect();
    let moment_resid = zero_discrete_moments(&mut vals, &xi, &orders)?;
    let amp = pow2(k);
    for v in &mut vals {
        *v *= amp;
    }
    Ok(Kernel {
        taps: vals,
        moment_resid,
    })
}

pub(crate) fn build_lowpass_kernel(
    grid: DyadicGrid,
    radius_log2: i32,
) -> Result<Kernel, FilterError> {
    let n = tap_count(0, grid.j_max(), radius_log2)
        .filter(|&n| n >= MIN_BASE_TAPS)
        .ok_or(FilterError::ResolutionTooCoarse {
            taps: tap_count(0, grid.j_max(), radius_log2).unwrap_or(0),
            min: MIN_BASE_TAPS,
        })?;
    let xi = abscissae(n, 0, grid.j_max(), radius_log2);
    let bump = BumpDerivative::new(0);
    let mut vals: Vec<f64> = xi.iter().map(|&u| bump.eval(u)).collect();
    let mass = dyadic_sum(&vals) * grid.delta();
    if mass <= 0.0 {
        return Err(FilterError::DegenerateProfile);
    }
    let inv = 1.0 / mass;
    for v in &mut vals {
        *v *= inv;
    }
    let resid = (dyadic_sum(&vals) * grid.delta() - 1.0).abs();
    Ok(Kernel {
        taps: vals,
        moment_resid: resid,
    })
}

/// Largest scale whose kernel still has `MIN_KERNEL_TAPS` taps.
pub(crate) fn max_scale(grid: DyadicGrid, radius_log2: i32) -> u32 {
    let e = grid.j_max() as i32 + 1 + radius_log2 - (MIN_KERNEL_TAPS.ilog2() as i32);
    e.max(0) as u32
}
