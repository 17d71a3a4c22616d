//! Haar analysis, synthesis, and projector algebra.
//!
//! Coefficient convention: for level `j >= 0` the stored coefficient is
//! `c_{j,mu} = 2^j <f, h_{j,mu}>`, so that `f = sum c_{j,mu} h_{j,mu}` for
//! Haar polynomials; the root level `j = -1` stores plain averages
//! `<f, 1_{[mu, mu+1)}>` with no scale factor.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CoreError;
use crate::grid::{pow2, DyadicGrid, SampledFunction};

/// One Haar index `(j, mu)`: level `j >= -1`, translate `mu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HaarIndex {
    pub j: i32,
    pub mu: i64,
}

impl HaarIndex {
    pub fn new(j: i32, mu: i64) -> Result<Self, CoreError> {
        if j < -1 {
            return Err(CoreError::LevelBelowRoot { j });
        }
        Ok(Self { j, mu })
    }

    /// Support `[2^-j mu, 2^-j (mu+1))` as exact dyadic floats
    /// (unit interval `[mu, mu+1)` for the root level).
    pub fn support(&self) -> (f64, f64) {
        if self.j < 0 {
            (self.mu as f64, (self.mu + 1) as f64)
        } else {
            let w = pow2(-self.j);
            (self.mu as f64 * w, (self.mu + 1) as f64 * w)
        }
    }

    /// Cell span on `grid`: `(start, half, len)` where the support covers
    /// cells `[start, start+len)` and (for `j >= 0`) the sign flips at
    /// `start + half`.
    pub(crate) fn cell_range(&self, grid: DyadicGrid) -> Result<(usize, usize, usize), CoreError> {
        let j_max = grid.j_max();
        if self.j < -1 {
            return Err(CoreError::LevelBelowRoot { j: self.j });
        }
        if self.j >= 0 && (self.j as u32) > j_max - 1 {
            return Err(CoreError::LevelOutOfRange {
                j: self.j,
                j_max,
            });
        }
        let (start, len) = if self.j < 0 {
            let lo = (self.mu as i128) << j_max;
            (lo, 1usize << j_max)
        } else {
            let shift = j_max - self.j as u32;
            let lo = (self.mu as i128) << shift;
            (lo, 1usize << shift)
        };
        let off = (grid.x_lo() as i128) << j_max;
        let start = start - off;
        if start < 0 || (start as u128 + len as u128) > grid.n_points() as u128 {
            return Err(CoreError::SupportOutOfWindow {
                j: self.j,
                mu: self.mu,
            });
        }
        let half = if self.j < 0 { 0 } else { len / 2 };
        Ok((start as usize, half, len))
    }
}

/// Sample `h_{j,mu}` on `grid`: `+1` on the left half cells, `-1` on the
/// right half, `0` elsewhere (root level: `+1` on the whole unit cell).
/// All values are exact floats.
pub fn sample_haar(grid: DyadicGrid, idx: HaarIndex) -> Result<SampledFunction, CoreError> {
    let (start, half, len) = idx.cell_range(grid)?;
    let mut out = SampledFunction::zeros(grid);
    let v = out.values_mut();
    if idx.j < 0 {
        for x in &mut v[start..start + len] {
            *x = 1.0;
        }
    } else {
        for x in &mut v[start..start + half] {
            *x = 1.0;
        }
        for x in &mut v[start + half..start + len] {
            *x = -1.0;
        }
    }
    Ok(out)
}

/// Sparse Haar coefficients over one grid. Exact zeros are never stored.
#[derive(Clone, Debug)]
pub struct HaarCoefficients {
    grid: DyadicGrid,
    map: BTreeMap<HaarIndex, f64>,
}

impl HaarCoefficients {
    pub fn new(grid: DyadicGrid) -> Self {
        Self {
            grid,
            map: BTreeMap::new(),
        }
    }

    pub fn grid(&self) -> DyadicGrid {
        self.grid
    }

    /// Insert a coefficient after validating the index against the grid.
    /// Exact zeros are dropped, keeping the representation canonical.
    pub fn insert(&mut self, idx: HaarIndex, value: f64) -> Result<(), CoreError> {
        if !value.is_finite() {
            return Err(CoreError::NonFinite { index: 0 });
        }
        idx.cell_range(self.grid)?;
        if value != 0.0 {
            self.map.insert(idx, value);
        } else {
            self.map.remove(&idx);
        }
        Ok(())
    }

    pub fn get(&self, idx: &HaarIndex) -> Option<f64> {
        self.map.get(idx).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HaarIndex, &f64)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Levels that carry at least one coefficient.
    pub fn levels(&self) -> BTreeSet<i32> {
        self.map.keys().map(|k| k.j).collect()
    }

    /// Plain text form: a `# grid` header followed by `j mu value` lines in
    /// index order. Values use shortest round-trip formatting, so
    /// `from_text(to_text(c))` reproduces every bit.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# grid {} {} {}",
            self.grid.j_max(),
            self.grid.x_lo(),
            self.grid.x_hi()
        );
        for (idx, v) in &self.map {
            let _ = writeln!(s, "{} {} {}", idx.j, idx.mu, v);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, CoreError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(CoreError::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let grid = match parts.as_slice() {
            ["#", "grid", j, lo, hi] => {
                let bad = |what: &str| CoreError::Parse {
                    line: 1,
                    msg: format!("bad {what} in grid header"),
                };
                DyadicGrid::new(
                    j.parse().map_err(|_| bad("j_max"))?,
                    lo.parse().map_err(|_| bad("x_lo"))?,
                    hi.parse().map_err(|_| bad("x_hi"))?,
                )?
            }
            _ => {
                return Err(CoreError::Parse {
                    line: 1,
                    msg: format!("expected `# grid j_max x_lo x_hi`, got `{header}`"),
                })
            }
        };
        let mut out = Self::new(grid);
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>, what: &str| -> Result<String, CoreError> {
                tok.map(str::to_owned).ok_or(CoreError::Parse {
                    line: i + 1,
                    msg: format!("missing {what}"),
                })
            };
            let j: i32 = parse(it.next(), "level")?
                .parse()
                .map_err(|_| CoreError::Parse {
                    line: i + 1,
                    msg: "bad level".into(),
                })?;
            let mu: i64 = parse(it.next(), "translate")?
                .parse()
                .map_err(|_| CoreError::Parse {
                    line: i + 1,
                    msg: "bad translate".into(),
                })?;
            let v: f64 = parse(it.next(), "value")?
                .parse()
                .map_err(|_| CoreError::Parse {
                    line: i + 1,
                    msg: "bad value".into(),
                })?;
            if it.next().is_some() {
                return Err(CoreError::Parse {
                    line: i + 1,
                    msg: "trailing tokens".into(),
                });
            }
            out.insert(HaarIndex::new(j, mu)?, v)?;
        }
        Ok(out)
    }
}

/// A finite set of Haar indices with `j >= 0` (a projector's index set).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HaarSubset {
    set: BTreeSet<HaarIndex>,
}

impl HaarSubset {
    pub fn from_indices<I: IntoIterator<Item = HaarIndex>>(iter: I) -> Result<Self, CoreError> {
        let mut set = BTreeSet::new();
        for idx in iter {
            if idx.j < 0 {
                return Err(CoreError::LevelBelowRoot { j: idx.j });
            }
            set.insert(idx);
        }
        Ok(Self { set })
    }

    /// All translates supported in `[0, 1)` at each given level.
    pub fn full_levels(levels: &[u32]) -> Self {
        let mut set = BTreeSet::new();
        for &j in levels {
            for mu in 0..(1i64 << j) {
                set.insert(HaarIndex { j: j as i32, mu });
            }
        }
        Self { set }
    }

    pub fn iter(&self) -> impl Iterator<Item = &HaarIndex> {
        self.set.iter()
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn contains(&self, idx: &HaarIndex) -> bool {
        self.set.contains(idx)
    }

    pub fn insert(&mut self, idx: HaarIndex) -> Result<(), CoreError> {
        if idx.j < 0 {
            return Err(CoreError::LevelBelowRoot { j: idx.j });
        }
        self.set.insert(idx);
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            set: self.set.union(&other.set).copied().collect(),
        }
    }

    /// Levels present in the set.
    pub fn levels(&self) -> BTreeSet<i32> {
        self.set.iter().map(|i| i.j).collect()
    }

    /// Dyadic frequency exponents present (the `n` of each `2^n`).
    pub fn frequencies(&self) -> BTreeSet<i64> {
        self.set.iter().map(|i| i.j as i64).collect()
    }
}

/// A `±1` sign per level, drawn once and reused across an experiment draw.
#[derive(Clone, Debug)]
pub struct SignAssignment {
    map: BTreeMap<i32, f64>,
}

impl SignAssignment {
    /// Independent fair signs per level from a seeded ChaCha stream
    /// (iteration order of the level set fixes the draw).
    pub fn random(levels: &BTreeSet<i32>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = levels
            .iter()
            .map(|&j| (j, if rng.gen::<bool>() { 1.0 } else { -1.0 }))
            .collect();
        Self { map }
    }

    pub fn constant_plus(levels: &BTreeSet<i32>) -> Self {
        Self {
            map: levels.iter().map(|&j| (j, 1.0)).collect(),
        }
    }

    pub fn from_map(map: BTreeMap<i32, f64>) -> Self {
        Self { map }
    }

    /// Sign at a level; levels never drawn default to `+1`.
    pub fn sign(&self, j: i32) -> f64 {
        self.map.get(&j).copied().unwrap_or(1.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i32, &f64)> {
        self.map.iter()
    }
}

/// Bottom-up block sums: `pyramid[l][b]` is the raw sum of the cell values
/// in the aligned block of `2^(j_max - l)` cells starting at `b * 2^(j_max-l)`.
/// Because each level sums adjacent pairs of the level below, these are the
/// same fold trees as [`crate::grid::dyadic_sum`] over the block slices.
struct Pyramid<'a> {
    cells: &'a [f64],
    levels: Vec<Vec<f64>>, // index l in 0..j_max
}

impl<'a> Pyramid<'a> {
    fn build(f: &'a SampledFunction) -> Self {
        let j_max = f.grid().j_max() as usize;
        let mut levels: Vec<Vec<f64>> = Vec::with_capacity(j_max);
        let mut prev: &[f64] = f.values();
        for _ in 0..j_max {
            let next: Vec<f64> = prev.chunks(2).map(|c| c[0] + c[1]).collect();
            levels.push(next);
            prev = levels.last().unwrap();
        }
        levels.reverse(); // levels[l] now holds scale-l block sums
        Self {
            cells: f.values(),
            levels,
        }
    }

    fn at(&self, l: usize) -> &[f64] {
        if l == self.levels.len() {
            self.cells
        } else {
            &self.levels[l]
        }
    }
}

fn coefficient_from_pyramid(
    pyr: &Pyramid,
    grid: DyadicGrid,
    idx: HaarIndex,
) -> Result<f64, CoreError> {
    let (start, half, len) = idx.cell_range(grid)?;
    let j_max = grid.j_max() as i32;
    if idx.j < 0 {
        // Root level: plain average over the unit cell, no 2^j factor.
        let l = 0usize;
        let b = start >> grid.j_max();
        debug_assert_eq!(len, 1usize << grid.j_max());
        Ok(pyr.at(l)[b] * grid.delta())
    } else {
        let l = (idx.j + 1) as usize; // block scale of each half
        let shift = grid.j_max() - l as u32;
        let b_plus = start >> shift;
        debug_assert_eq!(half << 1, len);
        let diff = pyr.at(l)[b_plus] - pyr.at(l)[b_plus + 1];
        Ok(diff * pow2(idx.j - j_max))
    }
}

/// All coefficients at the given levels (every translate supported in the
/// window), computed through one pass of pairwise block sums.
pub fn analyze(f: &SampledFunction, levels: &[i32]) -> Result<HaarCoefficients, CoreError> {
    let grid = f.grid();
    let j_max = grid.j_max();
    let mut wanted: BTreeSet<i32> = BTreeSet::new();
    for &j in levels {
        if j < -1 {
            return Err(CoreError::LevelBelowRoot { j });
        }
        if j >= 0 && j as u32 > j_max - 1 {
            return Err(CoreError::LevelOutOfRange { j, j_max });
        }
        wanted.insert(j);
    }
    let pyr = Pyramid::build(f);
    let mut out = HaarCoefficients::new(grid);
    for &j in &wanted {
        // i128 intermediates survive extreme window offsets; the range
        // itself has at most `n_points` entries so i64 holds the results.
        let (mu_lo, mu_hi) = if j < 0 {
            (grid.x_lo() as i128, grid.x_hi() as i128)
        } else {
            ((grid.x_lo() as i128) << j, (grid.x_hi() as i128) << j)
        };
        let (mu_lo, mu_hi) = (mu_lo as i64, mu_hi as i64);
        for mu in mu_lo..mu_hi {
            let idx = HaarIndex { j, mu };
            let c = coefficient_from_pyramid(&pyr, grid, idx)?;
            if c != 0.0 {
                out.map.insert(idx, c);
            }
        }
    }
    Ok(out)
}

/// Coefficients of `f` at exactly the indices of `subset`.
pub fn analyze_subset(
    f: &SampledFunction,
    subset: &HaarSubset,
) -> Result<HaarCoefficients, CoreError> {
    let grid = f.grid();
    let pyr = Pyramid::build(f);
    let mut out = HaarCoefficients::new(grid);
    for &idx in subset.iter() {
        let c = coefficient_from_pyramid(&pyr, grid, idx)?;
        if c != 0.0 {
            out.map.insert(idx, c);
        }
    }
    Ok(out)
}

/// Rebuild the function `sum c_{j,mu} h_{j,mu}` (root level contributes
/// `c * 1_{[mu,mu+1)}`). Entries are applied in index order.
pub fn synthesize(coeffs: &HaarCoefficients) -> SampledFunction {
    let grid = coeffs.grid();
    let mut out = SampledFunction::zeros(grid);
    let v = out.values_mut();
    for (idx, &c) in coeffs.iter() {
        let (start, half, len) = idx
            .cell_range(grid)
            .expect("validated at insertion");
        if idx.j < 0 {
            for x in &mut v[start..start + len] {
                *x += c;
            }
        } else {
            for x in &mut v[start..start + half] {
                *x += c;
            }
            for x in &mut v[start + half..start + len] {
                *x -= c;
            }
        }
    }
    out
}

/// Projection onto the span of `subset`: analyze, restrict, synthesize.
pub fn project(f: &SampledFunction, subset: &HaarSubset) -> Result<SampledFunction, CoreError> {
    Ok(synthesize(&analyze_subset(f, subset)?))
}

/// Signed projection `sum_E r_j c_{j,mu} h_{j,mu}` with per-level signs,
/// assembled in a single synthesis pass.
pub fn signed_project(
    f: &SampledFunction,
    subset: &HaarSubset,
    signs: &SignAssignment,
) -> Result<SampledFunction, CoreError> {
    let mut coeffs = analyze_subset(f, subset)?;
    let signed: Vec<(HaarIndex, f64)> = coeffs
        .iter()
        .map(|(idx, &c)| (*idx, signs.sign(idx.j) * c))
        .collect();
    coeffs.map = signed.into_iter().collect();
    Ok(synthesize(&coeffs))
}

/// Split an index set by the sign its level carries.
pub fn split_by_sign(subset: &HaarSubset, signs: &SignAssignment) -> (HaarSubset, HaarSubset) {
    let mut plus = BTreeSet::new();
    let mut minus = BTreeSet::new();
    for &idx in subset.iter() {
        if signs.sign(idx.j) >= 0.0 {
            plus.insert(idx);
        } else {
            minus.insert(idx);
        }
    }
    (HaarSubset { set: plus }, HaarSubset { set: minus })
}
