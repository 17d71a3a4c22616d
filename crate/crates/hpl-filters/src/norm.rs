//! The smoothness-space surrogate norm.
//!
//! ```text
//! ||f|| = || ( sum_{k=0}^{k_max} (2^{ks} |psi_k * f|)^q )^{1/q} ||_{L^p}
//! ```
//!
//! with the low-pass kernel at `k = 0` and band kernels above. The scale
//! sum is truncated at `k_max`; every norm inside one experiment uses the
//! same truncation, so ratios of norms are self-consistent.

use hpl_core::{dyadic_sum, CoreError, SampledFunction};

use crate::bank::FilterBank;
use crate::convolve::{padded_len, SpectralField, DIRECT_TAP_LIMIT};
use crate::error::FilterError;

/// Parameters of the surrogate norm: integrability `p`, summability `q`
/// (both strictly inside `(1, inf)`), smoothness `s`, scale cutoff `k_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TLParams {
    pub p: f64,
    pub q: f64,
    pub s: f64,
    pub k_max: u32,
}

impl TLParams {
    pub fn new(p: f64, q: f64, s: f64, k_max: u32) -> Result<Self, FilterError> {
        for (name, v) in [("p", p), ("q", q)] {
            if !v.is_finite() || v <= 1.0 {
                return Err(FilterError::ParamOutOfRange { name, value: v });
            }
        }
        if !s.is_finite() {
            return Err(FilterError::ParamOutOfRange { name: "s", value: s });
        }
        Ok(Self { p, q, s, k_max })
    }

    /// Conjugate exponent of `p`.
    pub fn p_conj(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// Conjugate exponent of `q`.
    pub fn q_conj(&self) -> f64 {
        self.q / (self.q - 1.0)
    }
}

/// Norm value plus the per-scale `L^p` sizes of the weighted pieces
/// (`per_scale[k] = || 2^{ks} psi_k * f ||_p`), handy in reports.
#[derive(Clone, Debug)]
pub struct FNormBreakdown {
    pub value: f64,
    pub per_scale: Vec<f64>,
}

impl FilterBank {
    /// Check `params` against this bank: the truncation must be resolvable
    /// and the kernel moments must dominate the smoothness.
    pub fn check_params(&self, params: &TLParams) -> Result<(), FilterError> {
        if params.k_max > self.max_scale() {
            return Err(FilterError::ScaleUnresolvable {
                k: params.k_max as i32,
                max_scale: self.max_scale(),
            });
        }
        if (self.m1() + 1) as f64 <= params.s.abs() {
            return Err(FilterError::SmoothnessMismatch {
                s: params.s,
                m1: self.m1(),
            });
        }
        Ok(())
    }

    /// Evaluate the surrogate norm of `f`.
    pub fn f_norm(
        &self,
        f: &SampledFunction,
        params: &TLParams,
    ) -> Result<FNormBreakdown, FilterError> {
        if f.grid() != self.grid() {
            return Err(CoreError::GridMismatch.into());
        }
        self.check_params(params)?;
        let grid = self.grid();
        let n = grid.n_points();
        let delta = grid.delta();
        // One forward FFT of f serves every large kernel.
        let mut spectral: Option<SpectralField> = None;
        let mut largest_fft_taps = 0usize;
        for k in 0..=params.k_max as i32 {
            let taps = if k == 0 {
                self.lowpass_taps().len()
            } else {
                self.band_taps(k)?.len()
            };
            if taps > DIRECT_TAP_LIMIT {
                largest_fft_taps = largest_fft_taps.max(taps);
            }
        }
        if largest_fft_taps > 0 {
            let len = padded_len(n + largest_fft_taps - 1);
            spectral = Some(SpectralField::new(f.values(), len));
        }

        let mut w = vec![0.0f64; n];
        let mut buf = vec![0.0f64; n];
        let mut per_scale = Vec::with_capacity(params.k_max as usize + 1);
        for k in 0..=params.k_max as i32 {
            let taps = if k == 0 {
                self.lowpass_taps()
            } else {
                self.band_taps(k)?
            };
            if taps.len() <= DIRECT_TAP_LIMIT {
                crate::convolve::convolve_direct(f.values(), taps, delta, &mut buf);
            } else {
                spectral
                    .as_ref()
                    .expect("spectral field prepared above")
                    .convolve(taps, delta, &mut buf);
            }
            let weight = (2.0f64).powf(k as f64 * params.s);
            let mut piece_p = Vec::with_capacity(n);
            if params.q == 2.0 {
                for (wi, &b) in w.iter_mut().zip(buf.iter()) {
                    let t = weight * b.abs();
                    *wi += t * t;
                    piece_p.push(t);
                }
            } else {
                for (wi, &b) in w.iter_mut().zip(buf.iter()) {
                    let t = weight * b.abs();
                    *wi += t.powf(params.q);
                    piece_p.push(t);
                }
            }
            // || 2^{ks} psi_k * f ||_p
            let powed: Vec<f64> = piece_p.iter().map(|t| t.powf(params.p)).collect();
            per_scale.push((dyadic_sum(&powed) * delta).powf(1.0 / params.p));
        }
        let pq = params.p / params.q;
        let powed: Vec<f64> = if pq == 1.0 {
            w
        } else {
            w.iter().map(|x| x.powf(pq)).collect()
        };
        let value = (dyadic_sum(&powed) * delta).powf(1.0 / params.p);
        Ok(FNormBreakdown { value, per_scale })
    }
}
