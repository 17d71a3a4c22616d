//! Frequency-tower family: atoms sit at every Haar cell midpoint of each
//! active coarse level `k`, oscillating `n` octaves faster than the cell.
//!
//! The component at shift `n` is
//!
//! `f_n = 2^{-N/q} * sum_{k in A} r_k 2^{-k s} * Ups_{k,n}`,
//!
//! with `Ups_{k,n} = 2^{n(-s + 1/q)} * sum_mu eta(2^{k+n}(x - mid_{k,mu}))`
//! and `r_k` the per-level signs.  The full function combines the shifts
//! with the caller's weights: `f = sum_{n=1}^N alpha_n f_n`.  Because the
//! atom's half-line sums are stride-exact, the Haar coefficient of `f_n`
//! at `(k, mu)` equals `-2^{1-n} * half_mass` on the nose, which the tests
//! rely on.

use std::collections::{BTreeMap, BTreeSet};

use hpl_core::{CoreError, DyadicGrid, SampledFunction, SignAssignment};

use crate::atom::Atom;
use crate::error::AdversarialError;

/// Parameters of the frequency-tower family.
#[derive(Clone, Debug)]
pub struct TowerSpec {
    levels: Vec<u32>,
    s: f64,
    q: f64,
    alphas: Vec<f64>,
    signs: SignAssignment,
}

impl TowerSpec {
    /// Validate and freeze a spec.  `alphas` has length `N + 1` with slot 0
    /// reserved (the assembled function starts at shift 1), and the level
    /// count must satisfy `2^N <= #levels < 2^{N+1}`.
    pub fn new(
        levels: Vec<u32>,
        s: f64,
        q: f64,
        alphas: Vec<f64>,
        signs: SignAssignment,
    ) -> Result<Self, AdversarialError> {
        let spec = Self::with_depth(levels, s, q, alphas, signs)?;
        let n = spec.n();
        let lo = 1usize << n.min(62);
        if !(lo..2 * lo).contains(&spec.levels.len()) {
            return Err(AdversarialError::CardinalityMismatch {
                card: spec.levels.len(),
                n,
            });
        }
        Ok(spec)
    }

    /// Like [`TowerSpec::new`] but with the shift count decoupled from
    /// the level count: any nonempty level set may carry any depth `N`
    /// (still `alphas.len() = N + 1`).  Resolution-capped level sets keep
    /// their full ladder this way; the measured projection ratio does not
    /// depend on the level count, only on the depth.
    pub fn with_depth(
        levels: Vec<u32>,
        s: f64,
        q: f64,
        alphas: Vec<f64>,
        signs: SignAssignment,
    ) -> Result<Self, AdversarialError> {
        let mut levels = levels;
        levels.sort_unstable();
        levels.dedup();
        if levels.is_empty() {
            return Err(CoreError::EmptySet.into());
        }
        if !(q.is_finite() && q > 1.0) {
            return Err(CoreError::InvalidExponent {
                name: "q",
                value: q,
            }
            .into());
        }
        if !s.is_finite() {
            return Err(CoreError::InvalidExponent {
                name: "s",
                value: s,
            }
            .into());
        }
        if alphas.len() < 2 {
            return Err(AdversarialError::AlphaLengthMismatch {
                got: alphas.len(),
                want: 2,
            });
        }
        for &a in &alphas {
            if !a.is_finite() {
                return Err(AdversarialError::CoefficientOutOfRange {
                    level: 0,
                    value: a,
                });
            }
        }
        Ok(Self {
            levels,
            s,
            q,
            alphas,
            signs,
        })
    }

    /// Shift count `N` (`alphas` holds `N + 1` entries).
    pub fn n(&self) -> u32 {
        (self.alphas.len() - 1) as u32
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn signs(&self) -> &SignAssignment {
        &self.signs
    }

    /// Plain-text form: one `key=value` per line.
    pub fn to_text(&self) -> String {
        let levels = join(self.levels.iter());
        let alphas = join(self.alphas.iter());
        let signs = join(self.levels.iter().map(|&k| {
            if self.signs.sign(k as i32) >= 0.0 {
                1
            } else {
                -1
            }
        }));
        format!(
            "family=tower\nlevels={levels}\ns={}\nq={}\nalphas={alphas}\nsigns={signs}\n",
            self.s, self.q
        )
    }

    /// Parse the `to_text` form back; unknown keys are rejected.
    pub fn from_text(text: &str) -> Result<Self, AdversarialError> {
        let map = parse_kv(text)?;
        expect_family(&map, "tower")?;
        let levels: Vec<u32> = parse_list(required(&map, "levels")?)?;
        let s: f64 = parse_scalar(required(&map, "s")?)?;
        let q: f64 = parse_scalar(required(&map, "q")?)?;
        let alphas: Vec<f64> = parse_list(required(&map, "alphas")?)?;
        let sign_vals: Vec<f64> = parse_list(required(&map, "signs")?)?;
        if sign_vals.len() != levels.len() {
            return Err(AdversarialError::SpecTextMalformed {
                detail: format!(
                    "{} signs for {} levels",
                    sign_vals.len(),
                    levels.len()
                ),
            });
        }
        let mut sign_map = BTreeMap::new();
        for (&k, &v) in levels.iter().zip(&sign_vals) {
            if v != 1.0 && v != -1.0 {
                return Err(AdversarialError::SpecTextMalformed {
                    detail: format!("sign {v} is not +/-1"),
                });
            }
            sign_map.insert(k as i32, v);
        }
        Self::with_depth(levels, s, q, alphas, SignAssignment::from_map(sign_map))
    }
}

/// Draw fresh per-level signs for the spec's level set.
pub fn tower_signs(levels: &[u32], seed: u64) -> SignAssignment {
    let set: BTreeSet<i32> = levels.iter().map(|&k| k as i32).collect();
    SignAssignment::random(&set, seed)
}

fn check_geometry(
    spec: &TowerSpec,
    atom: &Atom,
    grid: DyadicGrid,
    n: u32,
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
    if n > spec.n() {
        return Err(AdversarialError::PlacementInvalid {
            detail: format!("shift n = {n} exceeds N = {}", spec.n()),
        });
    }
    for &k in &spec.levels {
        if k + 1 > grid.j_max() {
            return Err(CoreError::LevelOutOfRange {
                j: k as i32,
                j_max: grid.j_max(),
            }
            .into());
        }
        atom.check_dilation(k as i64 + n as i64)?;
    }
    Ok(())
}

/// Assemble the component `f_n` on `grid`.
pub fn tower_component(
    spec: &TowerSpec,
    atom: &Atom,
    grid: DyadicGrid,
    n: u32,
) -> Result<SampledFunction, AdversarialError> {
    check_geometry(spec, atom, grid, n)?;
    let mut out = SampledFunction::zeros(grid);
    add_component(spec, atom, &mut out, n, 1.0);
    Ok(out)
}

/// Assemble the combined function `sum_{n=1}^N alpha_n f_n` on `grid`.
pub fn tower_function(
    spec: &TowerSpec,
    atom: &Atom,
    grid: DyadicGrid,
) -> Result<SampledFunction, AdversarialError> {
    for n in 1..=spec.n() {
        check_geometry(spec, atom, grid, n)?;
    }
    let mut out = SampledFunction::zeros(grid);
    for n in 1..=spec.n() {
        add_component(spec, atom, &mut out, n, spec.alphas[n as usize]);
    }
    Ok(out)
}

fn add_component(spec: &TowerSpec, atom: &Atom, out: &mut SampledFunction, n: u32, coeff: f64) {
    if coeff == 0.0 {
        return;
    }
    let j = out.grid().j_max();
    let big_n = spec.n() as f64;
    let shift_weight = 2f64.powf(n as f64 * (-spec.s + 1.0 / spec.q));
    let norm_weight = 2f64.powf(-big_n / spec.q);
    for &k in &spec.levels {
        let w = coeff
            * norm_weight
            * shift_weight
            * spec.signs.sign(k as i32)
            * 2f64.powf(-(k as f64) * spec.s);
        // One copy per Haar cell of level k, centered at the cell midpoint
        // (2 mu + 1) 2^{-k-1}.
        for mu in 0..(1i64 << k) {
            let center = (2 * mu + 1) << (j - k - 1);
            atom.add_copy(out, k + n, center, w);
        }
    }
}

// --- small text helpers shared with the interval family ---

pub(crate) fn join<T: std::fmt::Display>(iter: impl Iterator<Item = T>) -> String {
    iter.map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub(crate) fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, AdversarialError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            AdversarialError::SpecTextMalformed {
                detail: format!("line {}: expected key=value, got {line:?}", i + 1),
            }
        })?;
        if map
            .insert(key.trim().to_string(), value.trim().to_string())
            .is_some()
        {
            return Err(AdversarialError::SpecTextMalformed {
                detail: format!("duplicate key {:?}", key.trim()),
            });
        }
    }
    Ok(map)
}

pub(crate) fn required<'a>(
    map: &'a BTreeMap<String, String>,
    key: &str,
) -> Result<&'a str, AdversarialError> {
    map.get(key)
        .map(String::as_str)
        .ok_or_else(|| AdversarialError::SpecTextMalformed {
            detail: format!("missing key {key:?}"),
        })
}

pub(crate) fn expect_family(
    map: &BTreeMap<String, String>,
    want: &str,
) -> Result<(), AdversarialError> {
    let got = required(map, "family")?;
    if got != want {
        return Err(AdversarialError::SpecTextMalformed {
            detail: format!("family {got:?}, expected {want:?}"),
        });
    }
    Ok(())
}

pub(crate) fn parse_scalar<T: std::str::FromStr>(s: &str) -> Result<T, AdversarialError> {
    s.parse().map_err(|_| AdversarialError::SpecTextMalformed {
        detail: format!("cannot parse {s:?}"),
    })
}

pub(crate) fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, AdversarialError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|p| parse_scalar(p.trim())).collect()
}
