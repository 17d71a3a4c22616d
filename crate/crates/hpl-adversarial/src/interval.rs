//! Interval family: one high-frequency packet per frequency interval,
//! placed on a sparse lattice of left edges shared by every Haar level the
//! interval covers.
//!
//! Each interval `I_kappa = [b - N + 1, b]` (integer endpoints, length
//! `N`) contributes the packet
//!
//! `H_{b+N} = sum_{sigma=1}^{N} 2^{-sigma}
//!            sum_{0 < rho < 2^{b-c}} eta(2^{b+N-sigma}(x - rho 2^{c-b}))`
//!
//! and the assembled function is `f = sum_kappa r_l 2^{l/q'} H_l` with
//! `l = b + N`.  The matching coefficient set pairs every covered level
//! `j` with the translates `mu` on the lattice `2^{j-b+c} Z`, exactly the
//! cells whose left edge carries an atom train; there the Haar
//! coefficient is `N 2^{k-b-N} * half_mass` on the nose while every
//! off-lattice cell gets exactly zero.

use std::collections::BTreeMap;

use hpl_core::{CoreError, DyadicGrid, HaarIndex, HaarSubset, SampledFunction, SignAssignment};

use crate::atom::Atom;
use crate::error::AdversarialError;
use crate::tower::{expect_family, join, parse_kv, parse_list, parse_scalar, required};

/// Parameters of the interval family.
#[derive(Clone, Debug)]
pub struct IntervalSpec {
    levels: Vec<u32>,
    n_param: u32,
    intervals: Vec<(i64, i64)>,
    lattice_offset: u32,
    q: f64,
    signs: SignAssignment,
}

impl IntervalSpec {
    /// Validate and freeze a spec with the default lattice offset
    /// `c = N + 2`.  Intervals are inclusive `[lo, hi]` with
    /// `hi - lo + 1 = N`, pairwise disjoint, each meeting the frequency
    /// set, at most `4^N` of them, and `hi > c` so at least one atom train
    /// fits.
    pub fn new(
        levels: Vec<u32>,
        n_param: u32,
        intervals: Vec<(i64, i64)>,
        q: f64,
        signs: SignAssignment,
    ) -> Result<Self, AdversarialError> {
        Self::with_lattice_offset(levels, n_param, intervals, n_param + 2, q, signs)
    }

    /// Same as [`IntervalSpec::new`] with an explicit lattice offset
    /// `c >= N` (smaller offsets would let neighboring atom trains overlap
    /// a Haar cell).
    pub fn with_lattice_offset(
        levels: Vec<u32>,
        n_param: u32,
        intervals: Vec<(i64, i64)>,
        lattice_offset: u32,
        q: f64,
        signs: SignAssignment,
    ) -> Result<Self, AdversarialError> {
        let mut levels = levels;
        levels.sort_unstable();
        levels.dedup();
        if levels.is_empty() || intervals.is_empty() {
            return Err(CoreError::EmptySet.into());
        }
        if n_param == 0 {
            return Err(AdversarialError::IntervalInvalid {
                detail: "interval length N must be at least 1".into(),
            });
        }
        if !(q.is_finite() && q > 1.0) {
            return Err(CoreError::InvalidExponent {
                name: "q",
                value: q,
            }
            .into());
        }
        if lattice_offset < n_param {
            return Err(AdversarialError::IntervalInvalid {
                detail: format!(
                    "lattice offset {lattice_offset} below N = {n_param} breaks support disjointness"
                ),
            });
        }
        if (intervals.len() as u128) > 4u128.saturating_pow(n_param) {
            return Err(AdversarialError::IntervalInvalid {
                detail: format!("{} intervals exceed the 4^N cap", intervals.len()),
            });
        }
        let mut intervals = intervals;
        intervals.sort_unstable();
        for w in intervals.windows(2) {
            if w[0].1 >= w[1].0 {
                return Err(AdversarialError::IntervalInvalid {
                    detail: format!("intervals {:?} and {:?} overlap", w[0], w[1]),
                });
            }
        }
        for &(lo, hi) in &intervals {
            if hi - lo + 1 != n_param as i64 {
                return Err(AdversarialError::IntervalInvalid {
                    detail: format!("interval [{lo}, {hi}] does not have length N = {n_param}"),
                });
            }
            if !levels.iter().any(|&k| lo <= k as i64 && (k as i64) <= hi) {
                return Err(AdversarialError::IntervalInvalid {
                    detail: format!("interval [{lo}, {hi}] misses the frequency set"),
                });
            }
            if hi <= lattice_offset as i64 {
                return Err(AdversarialError::IntervalInvalid {
                    detail: format!(
                        "interval top {hi} must exceed the lattice offset {lattice_offset}"
                    ),
                });
            }
        }
        Ok(Self {
            levels,
            n_param,
            intervals,
            lattice_offset,
            q,
            signs,
        })
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn n_param(&self) -> u32 {
        self.n_param
    }

    pub fn intervals(&self) -> &[(i64, i64)] {
        &self.intervals
    }

    pub fn lattice_offset(&self) -> u32 {
        self.lattice_offset
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn signs(&self) -> &SignAssignment {
        &self.signs
    }

    /// Top endpoint `b` of each interval, ascending.
    pub fn b(&self) -> Vec<i64> {
        self.intervals.iter().map(|&(_, hi)| hi).collect()
    }

    /// Packet labels `l = b + N`, ascending; these index the signs.
    pub fn packet_levels(&self) -> Vec<i64> {
        self.b().iter().map(|&b| b + self.n_param as i64).collect()
    }

    /// Mean per-interval hit count `(1/M) sum_kappa #(I_kappa ∩ levels)`.
    pub fn z_average(&self) -> f64 {
        let total: usize = self
            .intervals
            .iter()
            .map(|&(lo, hi)| {
                self.levels
                    .iter()
                    .filter(|&&k| lo <= k as i64 && (k as i64) <= hi)
                    .count()
            })
            .sum();
        total as f64 / self.intervals.len() as f64
    }

    /// The matched coefficient set: for each interval, every covered level
    /// `j` paired with the lattice translates `mu = t 2^{j - b + c}`,
    /// `1 <= mu < 2^j`.
    pub fn index_set(&self, grid: DyadicGrid) -> Result<HaarSubset, AdversarialError> {
        let j_max = grid.j_max();
        let mut indices = Vec::new();
        for &(lo, hi) in &self.intervals {
            let b = hi;
            for &k in &self.levels {
                let j = k as i64;
                if j < lo || j > hi {
                    continue;
                }
                if k + 1 > j_max {
                    return Err(CoreError::LevelOutOfRange {
                        j: k as i32,
                        j_max,
                    }
                    .into());
                }
                let spacing_log = j - b + self.lattice_offset as i64;
                debug_assert!(spacing_log >= 1, "offset >= N keeps the lattice proper");
                let spacing = 1i64 << spacing_log;
                let mut mu = spacing;
                while mu < (1i64 << k) {
                    indices.push(HaarIndex::new(k as i32, mu)?);
                    mu += spacing;
                }
            }
        }
        Ok(HaarSubset::from_indices(indices)?)
    }

    /// Plain-text form: one `key=value` per line.
    pub fn to_text(&self) -> String {
        let levels = join(self.levels.iter());
        let intervals = self
            .intervals
            .iter()
            .map(|&(lo, hi)| format!("{lo}:{hi}"))
            .collect::<Vec<_>>()
            .join(";");
        let signs = join(self.packet_levels().iter().map(|&l| {
            if self.signs.sign(l as i32) >= 0.0 {
                1
            } else {
                -1
            }
        }));
        format!(
            "family=interval\nlevels={levels}\nn={}\nintervals={intervals}\nlattice_offset={}\nq={}\nsigns={signs}\n",
            self.n_param, self.lattice_offset, self.q
        )
    }

    /// Parse the `to_text` form back.
    pub fn from_text(text: &str) -> Result<Self, AdversarialError> {
        let map = parse_kv(text)?;
        expect_family(&map, "interval")?;
        let levels: Vec<u32> = parse_list(required(&map, "levels")?)?;
        let n_param: u32 = parse_scalar(required(&map, "n")?)?;
        let lattice_offset: u32 = parse_scalar(required(&map, "lattice_offset")?)?;
        let q: f64 = parse_scalar(required(&map, "q")?)?;
        let mut intervals = Vec::new();
        for part in required(&map, "intervals")?.split(';') {
            let (lo, hi) = part
                .split_once(':')
                .ok_or_else(|| AdversarialError::SpecTextMalformed {
                    detail: format!("interval {part:?} is not lo:hi"),
                })?;
            intervals.push((parse_scalar(lo.trim())?, parse_scalar(hi.trim())?));
        }
        intervals.sort_unstable();
        let sign_vals: Vec<f64> = parse_list(required(&map, "signs")?)?;
        if sign_vals.len() != intervals.len() {
            return Err(AdversarialError::SpecTextMalformed {
                detail: format!(
                    "{} signs for {} intervals",
                    sign_vals.len(),
                    intervals.len()
                ),
            });
        }
        let mut sign_map = BTreeMap::new();
        for (&(_, hi), &v) in intervals.iter().zip(&sign_vals) {
            if v != 1.0 && v != -1.0 {
                return Err(AdversarialError::SpecTextMalformed {
                    detail: format!("sign {v} is not +/-1"),
                });
            }
            sign_map.insert((hi + n_param as i64) as i32, v);
        }
        Self::with_lattice_offset(
            levels,
            n_param,
            intervals,
            lattice_offset,
            q,
            SignAssignment::from_map(sign_map),
        )
    }
}

/// Draw fresh signs for the packet labels `b + N` of an interval list.
pub fn interval_signs(intervals: &[(i64, i64)], n_param: u32, seed: u64) -> SignAssignment {
    let set = intervals
        .iter()
        .map(|&(_, hi)| (hi + n_param as i64) as i32)
        .collect::<std::collections::BTreeSet<_>>();
    SignAssignment::random(&set, seed)
}

fn check_geometry(
    spec: &IntervalSpec,
    atom: &Atom,
    grid: DyadicGrid,
) -> Result<(), AdversarialError> {
    if grid.x_lo() >= 0 || grid.x_hi() <= 1 {
        return Err(AdversarialError::WindowTooSmall {
            x_lo: grid.x_lo(),
            x_hi: grid.x_hi(),
        });
    }
    if atom.j_max() != grid.j_max() {
        return Err(CoreError::GridMismatch.into());
    }
    for &b in &spec.b() {
        // Finest packet dilation is b + N - 1 (sigma = 1).
        atom.check_dilation(b + spec.n_param as i64 - 1)?;
    }
    Ok(())
}

/// Assemble one packet `H_{b+N}` for the interval at position `kappa`
/// (ascending order), without the sign or the `2^{l/q'}` weight.
pub fn interval_packet(
    spec: &IntervalSpec,
    atom: &Atom,
    grid: DyadicGrid,
    kappa: usize,
) -> Result<SampledFunction, AdversarialError> {
    check_geometry(spec, atom, grid)?;
    if kappa >= spec.intervals.len() {
        return Err(AdversarialError::IntervalInvalid {
            detail: format!(
                "interval position {kappa} out of range (have {})",
                spec.intervals.len()
            ),
        });
    }
    let mut out = SampledFunction::zeros(grid);
    add_packet(spec, atom, &mut out, spec.intervals[kappa].1, 1.0);
    Ok(out)
}

/// Assemble the full signed function together with its matched coefficient
/// set.
pub fn interval_function(
    spec: &IntervalSpec,
    atom: &Atom,
    grid: DyadicGrid,
) -> Result<(SampledFunction, HaarSubset), AdversarialError> {
    check_geometry(spec, atom, grid)?;
    let subset = spec.index_set(grid)?;
    let mut out = SampledFunction::zeros(grid);
    let q_conj_inv = 1.0 - 1.0 / spec.q;
    for &b in &spec.b() {
        let l = b + spec.n_param as i64;
        let weight = spec.signs.sign(l as i32) * 2f64.powf(l as f64 * q_conj_inv);
        add_packet(spec, atom, &mut out, b, weight);
    }
    Ok((out, subset))
}

fn add_packet(spec: &IntervalSpec, atom: &Atom, out: &mut SampledFunction, b: i64, weight: f64) {
    let j = out.grid().j_max() as i64;
    let c = spec.lattice_offset as i64;
    let n = spec.n_param as i64;
    // Train centers x = rho 2^{c-b}: every left edge of the shared lattice.
    let step = 1i64 << (j + c - b);
    for sigma in 1..=n {
        let dilation = (b + n - sigma) as u32;
        let w = weight * 2f64.powf(-(sigma as f64));
        let mut rho = 1i64;
        while rho < (1i64 << (b - c)) {
            atom.add_copy(out, dilation, rho * step, w);
            rho += 1;
        }
    }
}
