//! Filtered-projection building blocks.
//!
//! The operator assembled here isolates one (offset, detune) pair of the
//! double sum behind filtered projections: take the scale-`k+m+n` band
//! component of `f`, read its Haar coefficients at level `k + m` on the
//! index set, rebuild that Haar polynomial, and band-filter the result at
//! scale `k`. Summing the pieces with weights `2^{-s(m+n)}` reproduces
//! `2^{ks} psi_k * P_E` applied to a scale-decomposed field — an algebraic
//! identity the integration tests verify directly.

use hpl_core::{analyze_subset, synthesize, HaarIndex, HaarSubset, SampledFunction};

use crate::bank::FilterBank;
use crate::error::FilterError;

impl FilterBank {
    /// The `(k, m, n)` component over `subset`. Pairs whose level `k + m`
    /// is absent from the set, or whose source scale `k + m + n` is
    /// negative, are identically zero; a zero field is returned for those.
    pub fn tkmn_component(
        &self,
        f: &SampledFunction,
        subset: &HaarSubset,
        k: i32,
        m: i32,
        n: i32,
    ) -> Result<SampledFunction, FilterError> {
        if f.grid() != self.grid() {
            return Err(hpl_core::CoreError::GridMismatch.into());
        }
        let level = k + m;
        let source_scale = k + m + n;
        let levels = subset.levels();
        if level < 0 || source_scale < 0 || !levels.contains(&level) {
            return Ok(SampledFunction::zeros(self.grid()));
        }
        // Scale component of f at the source scale (low-pass at zero, band
        // above, matching the kernel family of the norm).
        let band = self.convolve_scaled(f, source_scale)?;
        // Haar coefficients of that component at `level`, restricted to
        // the subset's translates.
        let at_level: Vec<HaarIndex> = subset
            .iter()
            .filter(|idx| idx.j == level)
            .copied()
            .collect();
        let restricted = HaarSubset::from_indices(at_level)?;
        let coeffs = analyze_subset(&band, &restricted)?;
        let poly = synthesize(&coeffs);
        // Filter the polynomial at the observation scale.
        self.convolve_scaled(&poly, k)
    }

    /// Partial sum of weighted components reproducing the filtered
    /// projection of a scale-decomposed field:
    ///
    /// `sum_{m,n} 2^{-s(m+n)} T^k_{m,n} field[k+m+n]`
    ///
    /// where `field[l]` is the caller's scale-`l` input family. Used by
    /// consistency tests; ranges are derived from the subset's levels and
    /// the family length.
    pub fn tkmn_reconstruct(
        &self,
        fields: &[SampledFunction],
        subset: &HaarSubset,
        k: i32,
        s: f64,
    ) -> Result<SampledFunction, FilterError> {
        let mut out = SampledFunction::zeros(self.grid());
        let levels = subset.levels();
        let l_top = fields.len() as i32 - 1;
        for &level in &levels {
            let m = level - k;
            for l in 0..=l_top {
                let n = l - level;
                let piece = self.tkmn_component(&fields[l as usize], subset, k, m, n)?;
                let weight = (2.0f64).powf(-s * (m + n) as f64);
                out.axpy(weight, &piece).map_err(FilterError::from)?;
            }
        }
        Ok(out)
    }
}
