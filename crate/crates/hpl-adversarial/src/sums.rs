//! Sparse sums of dilated atom copies with per-level separation control.
//!
//! A placement list puts weighted copies of the atom at chosen grid cells,
//! one dilation level per entry.  The separation rule — centers at level
//! `l` stay at least `2^{m-l}` apart for the family parameter `m`, with at
//! least `2^m` levels present — keeps the copies within a level disjoint
//! enough that Bernstein-type baselines apply, which is what the smooth
//! side of the experiments compares against.

use hpl_core::{lp_norm, CoreError, DyadicGrid, SampledFunction};

use crate::atom::Atom;
use crate::error::AdversarialError;

/// Copies of the atom at one dilation level.
///
/// `centers` are grid cells from `x = 0` (the copy at `c` sits at
/// `x = c * delta`); `coeffs` pair with `centers` and must stay in
/// `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct AtomPlacement {
    pub level: u32,
    pub centers: Vec<i64>,
    pub coeffs: Vec<f64>,
}

/// Assemble `sum_l 2^{-l s} sum_nu a_nu eta(2^l (x - x_nu))` after
/// validating the window, the level count, per-level separation, and the
/// coefficient range.
pub fn smooth_atom_sum(
    atom: &Atom,
    grid: DyadicGrid,
    m: u32,
    placements: &[AtomPlacement],
    s: f64,
) -> Result<SampledFunction, AdversarialError> {
    if grid.x_lo() >= 0 || grid.x_hi() <= 1 {
        return Err(AdversarialError::WindowTooSmall {
            x_lo: grid.x_lo(),
            x_hi: grid.x_hi(),
        });
    }
    if atom.j_max() != grid.j_max() {
        return Err(hpl_core::CoreError::GridMismatch.into());
    }
    if placements.len() < (1usize << m) {
        return Err(AdversarialError::LevelFamilyTooSmall {
            got: placements.len(),
            m,
        });
    }
    let mut seen = std::collections::BTreeSet::new();
    for p in placements {
        if !seen.insert(p.level) {
            return Err(AdversarialError::DuplicateLevel { level: p.level });
        }
        if p.level < m {
            return Err(AdversarialError::PlacementInvalid {
                detail: format!("level {} below the family parameter m = {m}", p.level),
            });
        }
        if p.centers.len() > (1usize << (p.level - m).min(62)) {
            return Err(AdversarialError::PlacementInvalid {
                detail: format!(
                    "level {}: {} centers exceed the 2^(l-m) cap",
                    p.level,
                    p.centers.len()
                ),
            });
        }
        atom.check_dilation(p.level as i64)?;
        if p.centers.len() != p.coeffs.len() {
            return Err(AdversarialError::PlacementInvalid {
                detail: format!(
                    "level {}: {} centers but {} coefficients",
                    p.level,
                    p.centers.len(),
                    p.coeffs.len()
                ),
            });
        }
        for &a in &p.coeffs {
            if !(a.is_finite() && a.abs() <= 1.0) {
                return Err(AdversarialError::CoefficientOutOfRange {
                    level: p.level,
                    value: a,
                });
            }
        }
        // Separation 2^{m-l} in x is 2^{j_max + m - l} in grid cells.
        let shift = grid.j_max() as i64 + m as i64 - p.level as i64;
        let min_gap = if shift >= 63 { i64::MAX } else { 1i64 << shift };
        let mut sorted = p.centers.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            let gap = w[1] - w[0];
            if gap < min_gap {
                return Err(AdversarialError::SeparationViolated {
                    level: p.level,
                    gap,
                    min: min_gap,
                });
            }
        }
        let span = 1i64 << grid.j_max();
        for &c in &p.centers {
            if c < 0 || c > span {
                return Err(AdversarialError::PlacementInvalid {
                    detail: format!("level {}: center {} outside the unit interval", p.level, c),
                });
            }
        }
    }

    let mut out = SampledFunction::zeros(grid);
    for p in placements {
        let weight = 2f64.powf(-(p.level as f64) * s);
        for (&c, &a) in p.centers.iter().zip(&p.coeffs) {
            atom.add_copy(&mut out, p.level, c, weight * a);
        }
    }
    Ok(out)
}

/// `L_p` norm of the layered indicator profile
/// `(sum_l |sum_nu a_nu 1_{I_nu}|^q)^{1/q}`, where `I_nu` is the
/// length-`2^{-l}` interval centered at the copy at `x_nu`.  This is the
/// sequence-side quantity the placement-sum norm is dominated by, so
/// the ratio of the two is the constant the contract tests freeze.
pub fn indicator_profile_norm(
    placements: &[AtomPlacement],
    grid: DyadicGrid,
    p: f64,
    q: f64,
) -> Result<f64, AdversarialError> {
    if !(q.is_finite() && q >= 1.0) {
        return Err(CoreError::InvalidExponent {
            name: "q",
            value: q,
        }
        .into());
    }
    let n = grid.n_points();
    let offset = -grid.x_lo() * (1i64 << grid.j_max());
    let mut acc = vec![0.0f64; n];
    for pl in placements {
        if pl.level as u32 >= grid.j_max() {
            return Err(CoreError::LevelOutOfRange {
                j: pl.level as i32,
                j_max: grid.j_max(),
            }
            .into());
        }
        // Half-open interval of 2^{j_max - l} cells centered on the copy;
        // separated copies never overlap, so each cell sees at most one.
        let half = 1i64 << (grid.j_max() - pl.level - 1).min(62);
        for (&c, &a) in pl.centers.iter().zip(&pl.coeffs) {
            let lo = (offset + c - half).max(0);
            let hi = (offset + c + half).min(n as i64);
            for i in lo..hi {
                acc[i as usize] += a.abs().powf(q);
            }
        }
    }
    for x in acc.iter_mut() {
        *x = x.powf(1.0 / q);
    }
    let f = SampledFunction::from_values(grid, acc)?;
    Ok(lp_norm(&f, p)?)
}
