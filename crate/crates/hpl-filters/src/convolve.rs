//! Hybrid direct/FFT convolution.
//!
//! Output semantics for a kernel of `n` taps on cell data `f`:
//!
//! ```text
//! out[i] = delta * sum_m taps[m] * f[i - m + n/2 - 1]
//! ```
//!
//! i.e. the integral `(K * f)(x_i)` at the cell left endpoint, with the
//! kernel sampled at cell centers and `f` piecewise constant (out-of-window
//! samples are zero). The direct path keeps summation in a fixed ascending
//! order, preserving the exact cancellations the moment-corrected kernels
//! were built for; kernels above [`DIRECT_TAP_LIMIT`] taps go through a
//! zero-padded complex FFT, which is orders of magnitude faster and agrees
//! with the direct path to near machine precision (a pinned test keeps the
//! two honest against each other).

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Above this tap count convolution switches to FFT.
pub const DIRECT_TAP_LIMIT: usize = 256;

pub(crate) fn convolve_direct(f: &[f64], taps: &[f64], delta: f64, out: &mut [f64]) {
    let n = taps.len();
    let shift = n / 2 - 1;
    for (i, o) in out.iter_mut().enumerate() {
        // valid m: 0 <= i + shift - m < f.len()
        let hi = (i + shift).min(n - 1);
        let lo = (i + shift).saturating_sub(f.len() - 1);
        let mut acc = 0.0;
        let base = i + shift;
        for m in lo..=hi {
            acc += taps[m] * f[base - m];
        }
        *o = acc * delta;
    }
}

/// Smallest 3-smooth number (2^a 3^b) at or above `n`.
pub(crate) fn padded_len(n: usize) -> usize {
    let mut best = usize::MAX;
    let mut p3 = 1usize;
    while p3 < n.saturating_mul(2) {
        let mut p = p3;
        while p < n {
            p = p.saturating_mul(2);
        }
        best = best.min(p);
        p3 = p3.saturating_mul(3);
    }
    best
}

/// Reusable FFT state: forward transform of one field at a fixed padded
/// length, convolved against many kernels.
pub(crate) struct SpectralField {
    len: usize,
    spec: Vec<Complex<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    forward: Arc<dyn Fft<f64>>,
}

impl SpectralField {
    pub fn new(f: &[f64], len: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let mut spec: Vec<Complex<f64>> = f
            .iter()
            .map(|&v| Complex::new(v, 0.0))
            .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
            .take(len)
            .collect();
        forward.process(&mut spec);
        Self {
            len,
            spec,
            inverse,
            forward,
        }
    }

    /// Convolve the cached field with `taps` and write the aligned,
    /// `delta`-scaled result over `out`.
    pub fn convolve(&self, taps: &[f64], delta: f64, out: &mut [f64]) {
        let n = taps.len();
        let shift = n / 2 - 1;
        let mut buf: Vec<Complex<f64>> = taps
            .iter()
            .map(|&v| Complex::new(v, 0.0))
            .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
            .take(self.len)
            .collect();
        self.forward.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(&self.spec) {
            *b *= s;
        }
        self.inverse.process(&mut buf);
        let norm = delta / self.len as f64;
        for (i, o) in out.iter_mut().enumerate() {
            *o = buf[i + shift].re * norm;
        }
    }
}

/// One-off convolution choosing the path by tap count.
pub(crate) fn convolve_auto(f: &[f64], taps: &[f64], delta: f64) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    if taps.len() <= DIRECT_TAP_LIMIT {
        convolve_direct(f, taps, delta, &mut out);
    } else {
        let len = padded_len(f.len() + taps.len() - 1);
        SpectralField::new(f, len).convolve(taps, delta, &mut out);
    }
    out
}
