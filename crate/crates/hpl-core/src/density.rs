//! Dyadic-frequency density statistics.
//!
//! All statistics act on a finite set `A` of frequency exponents (the `n`
//! of each dyadic frequency `2^n`). The windowed count at radius `N`
//! centered at `k` is `#{n in A : |n - k| <= N}`; the self-scaled variants
//! fix the radius to `log2(#A)` and take the worst (or best) center.

use std::collections::BTreeSet;

use crate::error::CoreError;

/// `#{n in A : |n - center| <= radius}`.
pub fn window_count(a: &BTreeSet<i64>, center: i64, radius: u32) -> usize {
    let r = radius as i64;
    a.range(center - r..=center + r).count()
}

/// Max of [`window_count`] over every integer center (equivalently over
/// centers within `radius` of the set, which is all that can matter).
pub fn z_window(a: &BTreeSet<i64>, radius: u32) -> usize {
    let (Some(&lo), Some(&hi)) = (a.first(), a.last()) else {
        return 0;
    };
    let r = radius as i64;
    (lo - r..=hi + r)
        .map(|k| window_count(a, k, radius))
        .max()
        .unwrap_or(0)
}

/// Radius used by the self-scaled statistics: `floor(log2 #A)`.
/// Integer centers and elements make the floor exact and lossless.
fn self_radius(a: &BTreeSet<i64>) -> Result<u32, CoreError> {
    if a.is_empty() {
        return Err(CoreError::EmptySet);
    }
    Ok((a.len() as u64).ilog2())
}

/// Worst-case local crowding: max over all centers of the window count at
/// radius `log2 #A`. For `#A = 1` this is 1.
pub fn upper_density(a: &BTreeSet<i64>) -> Result<usize, CoreError> {
    let r = self_radius(a)?;
    Ok(z_window(a, r))
}

/// Best-case local crowding seen from inside the set: min over centers
/// `n in A` of the window count at radius `log2 #A`.
pub fn lower_density(a: &BTreeSet<i64>) -> Result<usize, CoreError> {
    let r = self_radius(a)?;
    Ok(a.iter()
        .map(|&n| window_count(a, n, r))
        .min()
        .expect("non-empty checked"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityStats {
    pub upper: usize,
    pub lower: usize,
}

pub fn density_stats(a: &BTreeSet<i64>) -> Result<DensityStats, CoreError> {
    Ok(DensityStats {
        upper: upper_density(a)?,
        lower: lower_density(a)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> BTreeSet<i64> {
        v.iter().copied().collect()
    }

    #[test]
    fn contiguous_block() {
        let a = set(&(0..16).collect::<Vec<_>>());
        assert_eq!(upper_density(&a).unwrap(), 9); // radius 4, interior center
        assert_eq!(lower_density(&a).unwrap(), 5); // seen from an endpoint
    }

    #[test]
    fn arithmetic_progression_step_10() {
        let a = set(&[0, 10, 20, 30]);
        assert_eq!(upper_density(&a).unwrap(), 1); // radius 2 windows isolate
        assert_eq!(lower_density(&a).unwrap(), 1);
    }

    #[test]
    fn explicit_radius() {
        let a = set(&[0, 1, 2]);
        assert_eq!(z_window(&a, 2), 3);
        assert_eq!(window_count(&a, 0, 1), 2);
    }

    #[test]
    fn singleton_and_empty() {
        let a = set(&[7]);
        assert_eq!(upper_density(&a).unwrap(), 1);
        assert_eq!(lower_density(&a).unwrap(), 1);
        assert!(density_stats(&BTreeSet::new()).is_err());
    }
}
