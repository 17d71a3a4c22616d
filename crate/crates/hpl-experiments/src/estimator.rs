//! Lower-bound estimation for the operator norm of signed Haar
//! projections: maximize `max(‖P_{E+}f‖, ‖P_{E-}f‖, ‖T f‖/2)/‖f‖` over
//! seeded candidate functions from the enabled families and over per-level
//! sign splits of the index set.

use std::collections::BTreeSet;

use hpl_adversarial::{
    build_atom, interval_function, interval_signs, smooth_atom_sum, tower_component,
    tower_function, tower_signs, Atom, AtomPlacement, IntervalSpec, TowerSpec,
};
use hpl_core::{
    project, split_by_sign, synthesize, DyadicGrid, HaarCoefficients, HaarIndex, HaarSubset,
    SampledFunction, SignAssignment,
};
use hpl_filters::{FilterBank, TLParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{CandidateFamily, ExperimentConfig};
use crate::error::ExperimentError;

/// Atom smoothness order used by every candidate family.
const ATOM_M0: usize = 2;
/// Atom support radius (dyadic, fixed across the lab).
const ATOM_RADIUS: f64 = 0.03125;
/// Exhaustive coefficient patterns are enumerated up to this many active
/// indices; larger sets fall back to seeded draws.
const EXHAUSTIVE_INDEX_LIMIT: usize = 6;
/// Exhaustive level-sign splits are enumerated up to this many levels.
const EXHAUSTIVE_LEVEL_LIMIT: usize = 4;
/// Most indices a random bandlimited draw activates.
const RANDOM_INDEX_LIMIT: usize = 12;
/// Most atom levels a random placement draw uses.
const RANDOM_PLACEMENT_LEVELS: usize = 4;
/// Most atom copies per level in a random placement draw.
const RANDOM_PLACEMENT_COPIES: i64 = 8;

/// Best candidate found by [`estimate_projection_norm_lb`].
#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorOutcome {
    /// The certified lower bound (a ratio of surrogate norms).
    pub value: f64,
    /// Label of the family that produced the winner.
    pub family: String,
    /// Seed of the winning draw (pattern id for exhaustive enumeration).
    pub seed: u64,
}

impl EstimatorOutcome {
    fn zero() -> Self {
        Self {
            value: 0.0,
            family: "none".into(),
            seed: 0,
        }
    }
}

/// splitmix64 finalizer; decorrelates derived seeds.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-draw seed: deterministic in (base, stream, draw index) and
/// independent of which other streams run.
pub(crate) fn derive_seed(base: u64, stream: u64, t: u64) -> u64 {
    mix(base ^ mix(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(t)))
}

/// Fixed stream id per family, independent of config order so that adding
/// a family never changes another family's draws.
fn family_stream(family: CandidateFamily) -> u64 {
    match family {
        CandidateFamily::Tower => 1,
        CandidateFamily::Interval => 2,
        CandidateFamily::AtomSum => 3,
        CandidateFamily::Bandlimited => 4,
    }
}

/// The level-sign splits a candidate is scored against: every split when
/// the level count is small, otherwise the all-plus split plus one seeded
/// draw.
pub(crate) fn level_sign_sets(levels: &BTreeSet<i32>, seed: u64) -> Vec<SignAssignment> {
    if levels.len() <= EXHAUSTIVE_LEVEL_LIMIT {
        let lv: Vec<i32> = levels.iter().copied().collect();
        (0..(1u32 << lv.len()))
            .map(|mask| {
                let map = lv
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| (j, if (mask >> i) & 1 == 1 { -1.0 } else { 1.0 }))
                    .collect();
                SignAssignment::from_map(map)
            })
            .collect()
    } else {
        vec![
            SignAssignment::constant_plus(levels),
            SignAssignment::random(levels, seed),
        ]
    }
}

struct EvalCtx<'a> {
    e: &'a HaarSubset,
    params: &'a TLParams,
    bank: &'a FilterBank,
    best: Option<EstimatorOutcome>,
    any_denominator: bool,
}

impl EvalCtx<'_> {
    /// Score one candidate under each sign split and keep the first
    /// strict maximum (ties resolve to the earliest family/draw).
    fn consider(
        &mut self,
        f: &SampledFunction,
        sign_sets: &[SignAssignment],
        family: &'static str,
        seed: u64,
    ) -> Result<(), ExperimentError> {
        let denom = self.bank.f_norm(f, self.params)?.value;
        if !(denom.is_finite() && denom > 0.0) {
            return Ok(());
        }
        self.any_denominator = true;
        for signs in sign_sets {
            let (ep, em) = split_by_sign(self.e, signs);
            let fp = project(f, &ep)?;
            let np = self.bank.f_norm(&fp, self.params)?.value;
            let value = if em.is_empty() {
                // One-sided split: T = P_{E+}, so the maximum is ‖P_{E+}f‖.
                np / denom
            } else {
                let fm = project(f, &em)?;
                let nm = self.bank.f_norm(&fm, self.params)?.value;
                let diff = SampledFunction::difference(&fp, &fm)?;
                let nt = self.bank.f_norm(&diff, self.params)?.value;
                np.max(nm).max(nt / 2.0) / denom
            };
            if value.is_finite() && self.best.as_ref().map_or(true, |b| value > b.value) {
                self.best = Some(EstimatorOutcome {
                    value,
                    family: family.into(),
                    seed,
                });
            }
        }
        Ok(())
    }
}

/// Maximize the signed-projection ratio over the configured candidate
/// families. Returns a certified lower bound on the operator-norm
/// surrogate: every reported value was achieved by a concrete function.
/// Empty `E` trivially yields zero; if every candidate has zero norm the
/// input is considered degenerate.
pub fn estimate_projection_norm_lb(
    e: &HaarSubset,
    params: &TLParams,
    config: &ExperimentConfig,
    bank: &FilterBank,
) -> Result<EstimatorOutcome, ExperimentError> {
    config.validate()?;
    bank.check_params(params)?;
    if e.is_empty() {
        return Ok(EstimatorOutcome::zero());
    }
    let grid = bank.grid();
    let atom = build_atom(ATOM_M0, ATOM_RADIUS, grid)?;
    let max_dil = atom.max_dilation();
    let e_levels = e.levels();
    let levels: Vec<u32> = e_levels.iter().map(|&j| j as u32).collect();
    let min_level = levels[0];

    let mut ctx = EvalCtx {
        e,
        params,
        bank,
        best: None,
        any_denominator: false,
    };

    // Ladder depth: requested, capped by what the atom can resolve above
    // the lowest level of E.
    let budget = max_dil.saturating_sub(min_level);
    let depth = config.ladder_depth.unwrap_or(budget).min(budget);

    for &family in &config.families {
        let stream = family_stream(family);
        match family {
            CandidateFamily::Tower => {
                run_tower(&mut ctx, config, &atom, grid, &levels, max_dil, depth, stream)?;
            }
            CandidateFamily::Interval => {
                run_interval(
                    &mut ctx, config, &atom, grid, &levels, &e_levels, max_dil, depth, stream,
                )?;
            }
            CandidateFamily::AtomSum => {
                run_atom_sum(&mut ctx, config, &atom, grid, &levels, &e_levels, max_dil, stream)?;
            }
            CandidateFamily::Bandlimited => {
                run_bandlimited(&mut ctx, config, grid, &e_levels, stream)?;
            }
        }
    }

    match ctx.best {
        Some(best) => Ok(best),
        None if !ctx.any_denominator => Err(ExperimentError::DegenerateInput {
            detail: "every candidate had zero or unresolvable norm".into(),
        }),
        None => Ok(EstimatorOutcome::zero()),
    }
}

/// Layered midpoint-atom candidates: the equal-weight ladder plus its two
/// deepest single components, all scored with the ladder's own signs so
/// the signed projection adds the layers coherently.
#[allow(clippy::too_many_arguments)]
fn run_tower(
    ctx: &mut EvalCtx,
    config: &ExperimentConfig,
    atom: &Atom,
    grid: DyadicGrid,
    levels: &[u32],
    max_dil: u32,
    depth: u32,
    stream: u64,
) -> Result<(), ExperimentError> {
    if depth == 0 {
        return Ok(());
    }
    let usable: Vec<u32> = levels
        .iter()
        .copied()
        .filter(|&k| k + depth <= max_dil)
        .collect();
    if usable.is_empty() {
        return Ok(());
    }
    let mut alphas = vec![1.0; depth as usize + 1];
    alphas[0] = 0.0;
    let (s, q) = (ctx.params.s, ctx.params.q);
    for t in 0..config.samples {
        let seed = derive_seed(config.seed, stream, t as u64);
        let signs = tower_signs(&usable, seed);
        let spec = TowerSpec::with_depth(usable.clone(), s, q, alphas.clone(), signs.clone())?;
        let sets = [signs];
        let full = tower_function(&spec, atom, grid)?;
        ctx.consider(&full, &sets, "tower", seed)?;
        let top = tower_component(&spec, atom, grid, depth)?;
        ctx.consider(&top, &sets, "tower", seed)?;
        if depth >= 2 {
            let next = tower_component(&spec, atom, grid, depth - 1)?;
            ctx.consider(&next, &sets, "tower", seed)?;
        }
    }
    Ok(())
}

/// Colliding-scale atom trains on the highest usable interval of levels;
/// scored against the all-plus split (the plain projection) and one seeded
/// split per draw.
#[allow(clippy::too_many_arguments)]
fn run_interval(
    ctx: &mut EvalCtx,
    config: &ExperimentConfig,
    atom: &Atom,
    grid: DyadicGrid,
    levels: &[u32],
    e_levels: &BTreeSet<i32>,
    max_dil: u32,
    depth: u32,
    stream: u64,
) -> Result<(), ExperimentError> {
    if depth == 0 {
        return Ok(());
    }
    // Packets above the interval [hi-depth+1, hi] reach dilation
    // hi + depth - 1; the train lattice needs hi > depth.
    let hi = levels
        .iter()
        .copied()
        .filter(|&l| l > depth && l + depth <= max_dil + 1)
        .max();
    let Some(hi) = hi else {
        return Ok(());
    };
    let lo = hi as i64 - depth as i64 + 1;
    let intervals = vec![(lo, hi as i64)];
    let q = ctx.params.q;
    for t in 0..config.samples {
        let seed = derive_seed(config.seed, stream, t as u64);
        let packet_signs = interval_signs(&intervals, depth, seed);
        let spec = IntervalSpec::with_lattice_offset(
            levels.to_vec(),
            depth,
            intervals.clone(),
            depth,
            q,
            packet_signs,
        )?;
        let (f, _matched) = interval_function(&spec, atom, grid)?;
        let sets = level_sign_sets(e_levels, derive_seed(seed, stream, 1));
        ctx.consider(&f, &sets, "interval", seed)?;
    }
    Ok(())
}

/// Random separated atom placements on the resolvable levels of E.
#[allow(clippy::too_many_arguments)]
fn run_atom_sum(
    ctx: &mut EvalCtx,
    config: &ExperimentConfig,
    atom: &Atom,
    grid: DyadicGrid,
    levels: &[u32],
    e_levels: &BTreeSet<i32>,
    max_dil: u32,
    stream: u64,
) -> Result<(), ExperimentError> {
    let usable: Vec<u32> = levels.iter().copied().filter(|&k| k <= max_dil).collect();
    if usable.is_empty() {
        return Ok(());
    }
    for t in 0..config.samples {
        let seed = derive_seed(config.seed, stream, t as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let want = rng.gen_range(1..=usable.len().min(RANDOM_PLACEMENT_LEVELS));
        let mut chosen = BTreeSet::new();
        while chosen.len() < want {
            chosen.insert(usable[rng.gen_range(0..usable.len())]);
        }
        let placements: Vec<AtomPlacement> = chosen
            .iter()
            .map(|&l| {
                let bins = 1i64 << l;
                let count = rng.gen_range(1..=bins.min(RANDOM_PLACEMENT_COPIES)) as usize;
                let mut cells = BTreeSet::new();
                while cells.len() < count {
                    cells.insert(rng.gen_range(0..bins));
                }
                let centers: Vec<i64> = cells
                    .iter()
                    .map(|&b| b << (grid.j_max() - l))
                    .collect();
                let coeffs: Vec<f64> = (0..count).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                AtomPlacement {
                    level: l,
                    centers,
                    coeffs,
                }
            })
            .collect();
        let f = smooth_atom_sum(atom, grid, 0, &placements, ctx.params.s)?;
        let sets = level_sign_sets(e_levels, derive_seed(seed, stream, 1));
        ctx.consider(&f, &sets, "atom_sum", seed)?;
    }
    Ok(())
}

/// Haar polynomials supported on E: exhaustive {-1,0,+1} coefficient
/// patterns when E is small, otherwise seeded sparse draws. Magnitudes
/// `2^{-j(s-1/p)}` equalize the per-index contribution to the sequence
/// norm.
fn run_bandlimited(
    ctx: &mut EvalCtx,
    config: &ExperimentConfig,
    grid: DyadicGrid,
    e_levels: &BTreeSet<i32>,
    stream: u64,
) -> Result<(), ExperimentError> {
    let indices: Vec<HaarIndex> = ctx.e.iter().copied().collect();
    let (s, p) = (ctx.params.s, ctx.params.p);
    let magnitude = move |idx: &HaarIndex| 2f64.powf(-(idx.j as f64) * (s - 1.0 / p));
    if indices.len() <= EXHAUSTIVE_INDEX_LIMIT {
        // 3^m - 1 patterns; the sign splits reuse one fixed seed so the
        // whole enumeration is deterministic.
        let sets = level_sign_sets(e_levels, derive_seed(config.seed, stream, 0));
        let total = 3u64.pow(indices.len() as u32);
        for pattern in 1..total {
            let mut coeffs = HaarCoefficients::new(grid);
            let mut digits = pattern;
            for idx in &indices {
                let digit = digits % 3;
                digits /= 3;
                let c = match digit {
                    1 => magnitude(idx),
                    2 => -magnitude(idx),
                    _ => continue,
                };
                coeffs.insert(*idx, c)?;
            }
            let f = synthesize(&coeffs);
            ctx.consider(&f, &sets, "bandlimited", pattern)?;
        }
    } else {
        for t in 0..config.samples {
            let seed = derive_seed(config.seed, stream, t as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let count = rng.gen_range(1..=indices.len().min(RANDOM_INDEX_LIMIT));
            let mut picks = BTreeSet::new();
            while picks.len() < count {
                picks.insert(rng.gen_range(0..indices.len()));
            }
            let mut coeffs = HaarCoefficients::new(grid);
            for &i in &picks {
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                coeffs.insert(indices[i], sign * magnitude(&indices[i]))?;
            }
            let f = synthesize(&coeffs);
            let sets = level_sign_sets(e_levels, derive_seed(seed, stream, 1));
            ctx.consider(&f, &sets, "bandlimited", seed)?;
        }
    }
    Ok(())
}

/// Exhaustive reference: the best ratio over every ±-sign Haar polynomial
/// on E (≤ 6 active coefficients) under the same scoring as the harness.
/// With `families = [bandlimited]` and a small E the estimator reproduces
/// this value exactly; with more families it can only exceed it.
pub fn brute_force_ratio(
    e: &HaarSubset,
    params: &TLParams,
    config: &ExperimentConfig,
    bank: &FilterBank,
) -> Result<f64, ExperimentError> {
    if e.is_empty() {
        return Ok(0.0);
    }
    if e.len() > EXHAUSTIVE_INDEX_LIMIT {
        return Err(ExperimentError::DegenerateInput {
            detail: format!(
                "brute force handles at most {EXHAUSTIVE_INDEX_LIMIT} indices, got {}",
                e.len()
            ),
        });
    }
    bank.check_params(params)?;
    let mut ctx = EvalCtx {
        e,
        params,
        bank,
        best: None,
        any_denominator: false,
    };
    run_bandlimited(
        &mut ctx,
        config,
        bank.grid(),
        &e.levels(),
        family_stream(CandidateFamily::Bandlimited),
    )?;
    match ctx.best {
        Some(best) => Ok(best.value),
        None => Err(ExperimentError::DegenerateInput {
            detail: "every sign pattern had zero norm".into(),
        }),
    }
}
