//! Contract tests for the structured families: atom certification, the
//! exact coefficient identities, validation paths, serialization, and the
//! frozen norm constants (measured once by the `family_survey` example,
//! asserted here with headroom).

use std::collections::BTreeSet;
use std::sync::OnceLock;

use hpl_adversarial::{
    build_atom, indicator_profile_norm, interval_signs, tower_component, tower_function,
    interval_function, interval_packet, smooth_atom_sum, tower_signs, AdversarialError, Atom,
    AtomPlacement, TowerSpec, IntervalSpec,
};
use hpl_core::{analyze, dyadic_sum, CoreError, DyadicGrid, HaarIndex, SampledFunction};
use hpl_filters::{build_filter_bank, FilterBank, TLParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid(j: u32) -> DyadicGrid {
    DyadicGrid::new(j, -1, 2).unwrap()
}

static ATOM12: OnceLock<Atom> = OnceLock::new();
fn atom12() -> &'static Atom {
    ATOM12.get_or_init(|| build_atom(2, 2f64.powi(-5), grid(12)).unwrap())
}

static BANK12: OnceLock<FilterBank> = OnceLock::new();
fn bank12() -> &'static FilterBank {
    BANK12.get_or_init(|| build_filter_bank(grid(12), 5, 0.5).unwrap())
}

fn coeff(f: &SampledFunction, j: i32, mu: i64) -> f64 {
    analyze(f, &[j])
        .unwrap()
        .get(&HaarIndex::new(j, mu).unwrap())
        .unwrap_or(0.0)
}

/// One midpoint-centered copy eta(2^{k+n}(x - mid_{k,mu})).
fn single_tower_atom(atom: &Atom, g: DyadicGrid, k: u32, n: u32, mu: i64) -> SampledFunction {
    let center = (2 * mu + 1) << (g.j_max() - k - 1);
    let placements = vec![AtomPlacement {
        level: k + n,
        centers: vec![center],
        coeffs: vec![1.0],
    }];
    smooth_atom_sum(atom, g, 0, &placements, 0.0).unwrap()
}

// --- atom construction ---

#[test]
fn atom_certificate_is_frozen() {
    let atom = atom12();
    assert_eq!(atom.half_mass(), 0.5);
    assert_eq!(atom.max_dilation(), 6);
    assert_eq!(atom.m0(), 2);
    // Survey: constraint residual 1.6e-13.
    assert!(atom.constraint_resid() <= 1e-12);

    let prof = atom.profile();
    let vals = prof.values();
    let center = 1usize << 12;
    assert_eq!(vals[center], 0.0);
    // Oddness is structural: stored half mirrored with a sign flip.
    let reach = 1usize << (12 - 5);
    for d in 1..reach {
        assert_eq!(vals[center + d].to_bits(), (-vals[center - d]).to_bits());
    }
    // Support stays inside |x| < 2^-5.
    for (i, &v) in vals.iter().enumerate() {
        if i < center - reach || i > center + reach {
            assert_eq!(v, 0.0, "sample {i} outside the support is nonzero");
        }
    }
    // Discrete moments 0..=m0 vanish (survey: <= 1.3e-15).
    let pg = prof.grid();
    for m in 0..=2 {
        let terms: Vec<f64> = vals
            .iter()
            .enumerate()
            .map(|(i, &v)| v * pg.left_endpoint(i).powi(m))
            .collect();
        assert!(
            (dyadic_sum(&terms) * pg.delta()).abs() <= 1e-14,
            "moment {m} too large"
        );
    }
    // Half-line sums along every certified stride sit at 1/2
    // (survey: <= 7.8e-16).
    for r in 0..=atom.max_dilation() {
        let stride = 1usize << r;
        let terms: Vec<f64> = (1..)
            .map(|t| t * stride)
            .take_while(|&d| center + d < vals.len())
            .map(|d| vals[center + d])
            .collect();
        let sum = dyadic_sum(&terms) * pg.delta() * stride as f64;
        assert!((sum - 0.5).abs() <= 1e-12, "stride 2^{r} sum off: {sum}");
    }
}

#[test]
fn atom_construction_rejects_bad_inputs() {
    let g = grid(12);
    assert!(matches!(
        build_atom(3, 2f64.powi(-5), g),
        Err(AdversarialError::AtomParityMismatch { m0: 3 })
    ));
    assert!(matches!(
        build_atom(2, 0.3, g),
        Err(AdversarialError::UnsupportedAtomRadius { .. })
    ));
    // Radius above the ceiling is rejected even though it is a power of two.
    assert!(matches!(
        build_atom(2, 2f64.powi(-4), g),
        Err(AdversarialError::UnsupportedAtomRadius { .. })
    ));
    assert!(matches!(
        build_atom(2, 2f64.powi(-9), g),
        Err(AdversarialError::AtomResolutionTooCoarse { samples: 7, .. })
    ));
}

#[test]
fn single_copy_reproduces_the_stored_profile() {
    let atom = atom12();
    let g = grid(12);
    let level = 3u32;
    let center = 1i64 << 11; // x = 1/2
    let placements = vec![AtomPlacement {
        level,
        centers: vec![center],
        coeffs: vec![1.0],
    }];
    let f = smooth_atom_sum(atom, g, 0, &placements, 0.0).unwrap();
    let base = (1i64 << 12) + center;
    let ext = atom.half_extent(level);
    for (i, &v) in f.values().iter().enumerate() {
        let d = i as i64 - base;
        let want = if d.abs() <= ext {
            atom.value_at(level, d)
        } else {
            0.0
        };
        assert_eq!(v.to_bits(), want.to_bits(), "cell {i}");
    }
}

// --- tower family ---

#[test]
fn tower_atom_coefficient_matches_closed_form() {
    let atom = atom12();
    let g = grid(12);
    // Survey: worst deviation 6.7e-16 over this sweep.
    for k in 0u32..=5 {
        for n in 0u32..=3 {
            if k + n > atom.max_dilation() || (k == 0 && n == 0) {
                continue;
            }
            for &mu in &[0i64, (1i64 << k) / 2, (1i64 << k) - 1] {
                let f = single_tower_atom(atom, g, k, n, mu);
                let got = coeff(&f, k as i32, mu);
                let pred = -(2f64.powi(-(n as i32)));
                assert!(
                    (got - pred).abs() <= 1e-12,
                    "(k={k}, n={n}, mu={mu}): got {got}, want {pred}"
                );
            }
        }
    }
}

#[test]
fn tower_atom_other_translates_see_exactly_nothing() {
    let atom = atom12();
    let g = grid(12);
    let (k, n, mu) = (3u32, 2u32, 4i64);
    let f = single_tower_atom(atom, g, k, n, mu);
    let coeffs = analyze(&f, &[k as i32]).unwrap();
    for other in 0..(1i64 << k) {
        if other == mu {
            continue;
        }
        let c = coeffs
            .get(&HaarIndex::new(k as i32, other).unwrap())
            .unwrap_or(0.0);
        assert_eq!(c, 0.0, "translate {other} leaked");
    }
}

#[test]
fn tower_components_match_closed_form_at_the_coarsest_level() {
    let atom = atom12();
    let g = grid(12);
    let levels = vec![1u32, 2, 3, 4];
    let signs = tower_signs(&levels, 17);
    let spec = TowerSpec::new(levels.clone(), -0.7, 2.0, vec![0.0, 1.0, 0.8], signs).unwrap();
    let nn = spec.n() as f64;
    let k0 = levels[0]; // coarser levels would shed tails onto finer ones
    for n in 1..=spec.n() {
        let f = tower_component(&spec, atom, g, n).unwrap();
        let pred = 2f64.powf(-nn / spec.q())
            * spec.signs().sign(k0 as i32)
            * 2f64.powf(-(k0 as f64) * spec.s())
            * 2f64.powf(n as f64 * (-spec.s() + 1.0 / spec.q()))
            * -(2f64.powf(-(n as f64)));
        for mu in 0..(1i64 << k0) {
            let got = coeff(&f, k0 as i32, mu);
            assert!(
                (got - pred).abs() <= 1e-12,
                "(n={n}, mu={mu}): got {got}, want {pred}"
            );
        }
    }
}

#[test]
fn tower_function_is_linear_in_alphas() {
    let atom = atom12();
    let g = grid(12);
    let levels = vec![0u32, 1, 2, 3];
    let signs = tower_signs(&levels, 41);
    let base = TowerSpec::new(levels.clone(), -0.4, 2.0, vec![0.0, 0.6, -0.3], signs).unwrap();
    let f = tower_function(&base, atom, g).unwrap();
    let f1 = tower_component(&base, atom, g, 1).unwrap();
    let f2 = tower_component(&base, atom, g, 2).unwrap();
    let mut recomposed = SampledFunction::zeros(g);
    recomposed.axpy(0.6, &f1).unwrap();
    recomposed.axpy(-0.3, &f2).unwrap();
    let d = SampledFunction::difference(&f, &recomposed).unwrap();
    // Sample amplitudes run to a few hundred; the recomposition differs
    // only in multiplication order, so the gap is bare f64 dust.
    assert!(
        d.linf_norm() <= 1e-12 * (1.0 + f.linf_norm()),
        "residual {}",
        d.linf_norm()
    );
}

#[test]
fn flipping_one_sign_changes_exactly_the_level_k_part() {
    let atom = atom12();
    let g = grid(12);
    let levels = vec![1u32, 2, 3, 4];
    let plus = hpl_core::SignAssignment::constant_plus(&levels.iter().map(|&k| k as i32).collect());
    let mut flipped_map: std::collections::BTreeMap<i32, f64> =
        levels.iter().map(|&k| (k as i32, 1.0)).collect();
    let flip_k = 3u32;
    flipped_map.insert(flip_k as i32, -1.0);
    let flipped = hpl_core::SignAssignment::from_map(flipped_map);

    let alphas = vec![0.0, 1.0, 0.5];
    let a = TowerSpec::new(levels.clone(), -0.7, 2.0, alphas.clone(), plus).unwrap();
    let b = TowerSpec::new(levels.clone(), -0.7, 2.0, alphas, flipped).unwrap();
    let fa = tower_function(&a, atom, g).unwrap();
    let fb = tower_function(&b, atom, g).unwrap();
    let d = SampledFunction::difference(&fa, &fb).unwrap();

    // The difference is twice the level-k sub-sum: supported only inside
    // the level-k atom copies (dilations k+1, k+2 around the level-k
    // midpoints); every other sample cancels bitwise.
    let j = g.j_max();
    let offset = 1i64 << j;
    let mut allowed = vec![false; d.values().len()];
    for n in 1..=2u32 {
        let ext = atom.half_extent(flip_k + n);
        for mu in 0..(1i64 << flip_k) {
            let center = offset + ((2 * mu + 1) << (j - flip_k - 1));
            for idx in (center - ext)..=(center + ext) {
                allowed[idx as usize] = true;
            }
        }
    }
    let mut support_hits = 0usize;
    for (i, &v) in d.values().iter().enumerate() {
        if !allowed[i] {
            assert_eq!(v, 0.0, "difference leaked outside level {flip_k} at {i}");
        } else if v != 0.0 {
            support_hits += 1;
        }
    }
    assert!(support_hits > 0, "difference is empty");
}

#[test]
fn tower_spec_validation() {
    let levels = vec![0u32, 1, 2];
    let signs = tower_signs(&levels, 1);
    // 3 levels cannot encode N = 2 (need 4..8).
    assert!(matches!(
        TowerSpec::new(levels.clone(), -0.5, 2.0, vec![0.0, 1.0, 1.0], signs.clone()),
        Err(AdversarialError::CardinalityMismatch { card: 3, n: 2 })
    ));
    assert!(matches!(
        TowerSpec::new(levels.clone(), -0.5, 2.0, vec![1.0], signs.clone()),
        Err(AdversarialError::AlphaLengthMismatch { .. })
    ));
    assert!(matches!(
        TowerSpec::new(levels.clone(), -0.5, 1.0, vec![0.0, 1.0], signs.clone()),
        Err(AdversarialError::Core(CoreError::InvalidExponent { .. }))
    ));
    assert!(matches!(
        TowerSpec::new(levels.clone(), -0.5, 2.0, vec![0.0, f64::NAN], signs.clone()),
        Err(AdversarialError::CoefficientOutOfRange { .. })
    ));

    let atom = atom12();
    let ok = TowerSpec::new(vec![0, 1], -0.5, 2.0, vec![0.0, 1.0], tower_signs(&[0, 1], 2))
        .unwrap();
    // Component index beyond N.
    assert!(matches!(
        tower_component(&ok, atom, grid(12), 5),
        Err(AdversarialError::PlacementInvalid { .. })
    ));
    // Window must strictly contain [0, 1].
    let tight = DyadicGrid::new(12, 0, 1).unwrap();
    assert!(matches!(
        tower_function(&ok, atom, tight),
        Err(AdversarialError::WindowTooSmall { .. })
    ));
    // Atom and target grid resolutions must agree.
    assert!(matches!(
        tower_function(&ok, atom, grid(11)),
        Err(AdversarialError::Core(CoreError::GridMismatch))
    ));
    // Levels too fine for the atom's certified dilations.
    let fine = TowerSpec::new(
        vec![5, 6, 7, 8],
        -0.5,
        2.0,
        vec![0.0, 1.0, 1.0],
        tower_signs(&[5, 6, 7, 8], 3),
    )
    .unwrap();
    assert!(matches!(
        tower_function(&fine, atom, grid(12)),
        Err(AdversarialError::DilationOverflow { .. })
    ));
}

// --- interval family ---

#[test]
fn interval_packet_diagonal_matches_closed_form() {
    let atom = atom12();
    let g = grid(12);
    // b = 5 with offset c = 2 gives 7 atom trains per level.
    let signs = interval_signs(&[(4, 5)], 2, 23);
    let spec =
        IntervalSpec::with_lattice_offset(vec![4, 5], 2, vec![(4, 5)], 2, 2.0, signs).unwrap();
    let h = interval_packet(&spec, atom, g, 0).unwrap();
    let subset = spec.index_set(g).unwrap();
    assert_eq!(subset.len(), 14, "7 lattice points at each of 2 levels");
    // Survey: worst deviation 1.1e-16.
    for idx in subset.iter() {
        let got = coeff(&h, idx.j, idx.mu);
        let pred = 2.0 * 2f64.powi(idx.j - 5 - 2) * atom.half_mass();
        assert!(
            (got - pred).abs() <= 1e-12,
            "({}, {}): got {got}, want {pred}",
            idx.j,
            idx.mu
        );
    }
}

#[test]
fn interval_translates_between_trains_see_exactly_nothing() {
    let atom = atom12();
    let g = grid(12);
    let signs = interval_signs(&[(4, 5)], 2, 29);
    let spec =
        IntervalSpec::with_lattice_offset(vec![4, 5], 2, vec![(4, 5)], 2, 2.0, signs).unwrap();
    let h = interval_packet(&spec, atom, g, 0).unwrap();
    // Level 5 lattice spacing is 4; translates two steps from any train
    // are untouched (adjacent ones legitimately catch atom tails).
    let coeffs = analyze(&h, &[5]).unwrap();
    for mu in (0..32i64).filter(|m| m % 4 == 1 || m % 4 == 2) {
        let c = coeffs
            .get(&HaarIndex::new(5, mu).unwrap())
            .unwrap_or(0.0);
        assert_eq!(c, 0.0, "translate {mu} leaked");
    }
}

#[test]
fn interval_signed_function_matches_closed_form_on_its_index_set() {
    let atom = atom12();
    let g = grid(12);
    let intervals = vec![(4i64, 5i64)];
    let signs = interval_signs(&intervals, 2, 31);
    let spec = IntervalSpec::new(vec![4, 5], 2, intervals, 2.0, signs).unwrap();
    let (f, subset) = interval_function(&spec, atom, g).unwrap();
    // Survey: worst deviation 1.3e-15.
    for idx in subset.iter() {
        let got = coeff(&f, idx.j, idx.mu);
        let pred = spec.signs().sign(7)
            * 2f64.powf(7.0 * 0.5)
            * 2.0
            * 2f64.powi(idx.j - 5 - 2)
            * atom.half_mass();
        assert!(
            (got - pred).abs() <= 1e-12,
            "({}, {}): got {got}, want {pred}",
            idx.j,
            idx.mu
        );
    }
}

#[test]
fn interval_index_set_and_density_are_as_constructed() {
    let signs = interval_signs(&[(4, 5), (6, 7)], 2, 3);
    let spec = IntervalSpec::new(vec![4, 5, 7], 2, vec![(4, 5), (6, 7)], 2.0, signs).unwrap();
    assert_eq!(spec.b(), vec![5, 7]);
    assert_eq!(spec.packet_levels(), vec![7, 9]);
    // Interval one covers levels {4,5}, interval two covers {7} only.
    assert!((spec.z_average() - 1.5).abs() < 1e-15);

    let g = grid(14);
    let subset = spec.index_set(g).unwrap();
    // kappa=1 (b=5, c=4): j=4 spacing 8 -> mu in {8}, j=5 spacing 16 -> {16}.
    // kappa=2 (b=7, c=4): j=7 spacing 16 -> mu in {16,...,112}, 7 points.
    assert_eq!(subset.len(), 9);
    assert!(subset.contains(&HaarIndex::new(4, 8).unwrap()));
    assert!(subset.contains(&HaarIndex::new(5, 16).unwrap()));
    assert!(subset.contains(&HaarIndex::new(7, 112).unwrap()));
    assert!(!subset.contains(&HaarIndex::new(7, 8).unwrap()));
}

#[test]
fn interval_spec_validation() {
    let signs = interval_signs(&[(4, 5)], 2, 5);
    let mk = |intervals: Vec<(i64, i64)>, n: u32| {
        IntervalSpec::new(vec![4u32, 5], n, intervals, 2.0, signs.clone())
    };
    assert!(matches!(
        mk(vec![(4, 5), (5, 6)], 2),
        Err(AdversarialError::IntervalInvalid { .. })
    ));
    assert!(matches!(
        mk(vec![(4, 6)], 2),
        Err(AdversarialError::IntervalInvalid { .. })
    ));
    // Misses the frequency set {4, 5}.
    assert!(matches!(
        mk(vec![(8, 9)], 2),
        Err(AdversarialError::IntervalInvalid { .. })
    ));
    // Top endpoint does not clear the default lattice offset N + 2.
    assert!(matches!(
        mk(vec![(3, 4)], 2),
        Err(AdversarialError::IntervalInvalid { .. })
    ));
    assert!(matches!(
        mk(vec![(4, 5)], 0),
        Err(AdversarialError::IntervalInvalid { .. })
    ));
    // Offset below N breaks train disjointness.
    assert!(matches!(
        IntervalSpec::with_lattice_offset(vec![4, 5], 2, vec![(4, 5)], 1, 2.0, signs.clone()),
        Err(AdversarialError::IntervalInvalid { .. })
    ));
    // More than 4^N intervals.
    let five: Vec<(i64, i64)> = (0..5).map(|i| (4 + 2 * i, 4 + 2 * i)).collect();
    assert!(matches!(
        IntervalSpec::new(
            vec![4, 6, 8, 10, 12],
            1,
            five,
            2.0,
            interval_signs(&[(4, 4)], 1, 6)
        ),
        Err(AdversarialError::IntervalInvalid { .. })
    ));
    // Packets too fine for the atom's certified dilations.
    let atom = atom12();
    let deep = IntervalSpec::new(
        vec![8u32, 9],
        2,
        vec![(8, 9)],
        2.0,
        interval_signs(&[(8, 9)], 2, 7),
    )
    .unwrap();
    assert!(matches!(
        interval_function(&deep, atom, grid(12)),
        Err(AdversarialError::DilationOverflow { .. })
    ));
}

// --- generic placements ---

#[test]
fn placement_validation() {
    let atom = atom12();
    let g = grid(12);
    let mk = |level: u32, centers: Vec<i64>, coeffs: Vec<f64>| AtomPlacement {
        level,
        centers,
        coeffs,
    };
    // Fewer than 2^m levels.
    assert!(matches!(
        smooth_atom_sum(atom, g, 2, &[mk(3, vec![0], vec![1.0])], 0.0),
        Err(AdversarialError::LevelFamilyTooSmall { got: 1, m: 2 })
    ));
    // Duplicate level.
    assert!(matches!(
        smooth_atom_sum(
            atom,
            g,
            0,
            &[mk(3, vec![0], vec![1.0]), mk(3, vec![2048], vec![1.0])],
            0.0
        ),
        Err(AdversarialError::DuplicateLevel { level: 3 })
    ));
    // Level below the family parameter.
    assert!(matches!(
        smooth_atom_sum(
            atom,
            g,
            2,
            &[
                mk(1, vec![0], vec![1.0]),
                mk(3, vec![0], vec![1.0]),
                mk(4, vec![0], vec![1.0]),
                mk(5, vec![0], vec![1.0])
            ],
            0.0
        ),
        Err(AdversarialError::PlacementInvalid { .. })
    ));
    // Count above 2^{l-m}.
    assert!(matches!(
        smooth_atom_sum(
            atom,
            g,
            1,
            &[
                mk(1, vec![0, 2048], vec![1.0, 1.0]),
                mk(2, vec![0, 2048], vec![1.0, 1.0])
            ],
            0.0
        ),
        Err(AdversarialError::PlacementInvalid { .. })
    ));
    // Separation below 2^{m-l}.
    assert!(matches!(
        smooth_atom_sum(atom, g, 1, &[mk(3, vec![0, 512], vec![1.0, 1.0]),
            mk(4, vec![0], vec![1.0])], 0.0),
        Err(AdversarialError::SeparationViolated { level: 3, .. })
    ));
    // Coefficient above 1 in magnitude.
    assert!(matches!(
        smooth_atom_sum(atom, g, 0, &[mk(3, vec![0], vec![1.5])], 0.0),
        Err(AdversarialError::CoefficientOutOfRange { .. })
    ));
    // Center outside [0, 1].
    assert!(matches!(
        smooth_atom_sum(atom, g, 0, &[mk(3, vec![-64], vec![1.0])], 0.0),
        Err(AdversarialError::PlacementInvalid { .. })
    ));
    // Mismatched centers/coefficients.
    assert!(matches!(
        smooth_atom_sum(atom, g, 0, &[mk(3, vec![0, 2048], vec![1.0])], 0.0),
        Err(AdversarialError::PlacementInvalid { .. })
    ));
    // Dilation beyond the atom's certified range.
    assert!(matches!(
        smooth_atom_sum(atom, g, 0, &[mk(9, vec![0], vec![1.0])], 0.0),
        Err(AdversarialError::DilationOverflow { .. })
    ));
    // Window must strictly contain [0, 1].
    let tight = DyadicGrid::new(12, 0, 2).unwrap();
    assert!(matches!(
        smooth_atom_sum(atom, tight, 0, &[mk(3, vec![0], vec![1.0])], 0.0),
        Err(AdversarialError::WindowTooSmall { .. })
    ));
}

#[test]
fn constructed_functions_stay_inside_the_padded_unit_window() {
    let atom = atom12();
    let g = grid(12);
    let spill = 2f64.powi(-5);
    let check = |f: &SampledFunction, label: &str| {
        for (i, &v) in f.values().iter().enumerate() {
            let x = g.left_endpoint(i);
            if x < -spill - g.delta() || x > 1.0 + spill {
                assert_eq!(v, 0.0, "{label}: spill at x = {x}");
            }
        }
    };
    let placements = vec![AtomPlacement {
        level: 5,
        centers: vec![0, 1 << 12],
        coeffs: vec![1.0, -1.0],
    }];
    check(
        &smooth_atom_sum(atom, g, 0, &placements, 0.3).unwrap(),
        "placements",
    );
    let spec = TowerSpec::new(
        vec![0, 1],
        -0.5,
        2.0,
        vec![0.0, 1.0],
        tower_signs(&[0, 1], 4),
    )
    .unwrap();
    check(&tower_function(&spec, atom, g).unwrap(), "tower");
    let ispec = IntervalSpec::new(
        vec![4, 5],
        2,
        vec![(4, 5)],
        2.0,
        interval_signs(&[(4, 5)], 2, 4),
    )
    .unwrap();
    check(&interval_function(&ispec, atom, g).unwrap().0, "interval");
}

#[test]
fn identical_seeds_give_bit_identical_functions() {
    let atom = atom12();
    let g = grid(12);
    let build5 = |seed: u64| {
        let spec = TowerSpec::new(
            vec![0, 1, 2, 3],
            -0.7,
            2.0,
            vec![0.0, 1.0, 0.5],
            tower_signs(&[0, 1, 2, 3], seed),
        )
        .unwrap();
        tower_function(&spec, atom, g).unwrap()
    };
    let a = build5(99);
    let b = build5(99);
    let c = build5(100);
    assert!(a
        .values()
        .iter()
        .zip(b.values())
        .all(|(x, y)| x.to_bits() == y.to_bits()));
    assert!(
        SampledFunction::difference(&a, &c).unwrap().linf_norm() > 0.0,
        "different seeds should differ"
    );

    let build6 = |seed: u64| {
        let intervals = vec![(4i64, 5i64)];
        let spec = IntervalSpec::new(
            vec![4, 5],
            2,
            intervals.clone(),
            2.0,
            interval_signs(&intervals, 2, seed),
        )
        .unwrap();
        interval_function(&spec, atom, g).unwrap().0
    };
    let a = build6(7);
    let b = build6(7);
    assert!(a
        .values()
        .iter()
        .zip(b.values())
        .all(|(x, y)| x.to_bits() == y.to_bits()));
}

// --- serialization ---

#[test]
fn spec_text_roundtrips() {
    let spec = TowerSpec::new(
        vec![0, 2, 5, 6],
        -0.7,
        2.0,
        vec![0.0, 1.0, -0.25],
        tower_signs(&[0, 2, 5, 6], 12),
    )
    .unwrap();
    let text = spec.to_text();
    let back = TowerSpec::from_text(&text).unwrap();
    assert_eq!(back.to_text(), text);
    assert_eq!(back.levels(), spec.levels());
    assert_eq!(back.alphas(), spec.alphas());
    for &k in spec.levels() {
        assert_eq!(back.signs().sign(k as i32), spec.signs().sign(k as i32));
    }

    let intervals = vec![(4i64, 5i64), (6, 7)];
    let ispec = IntervalSpec::new(
        vec![4, 5, 7],
        2,
        intervals.clone(),
        2.0,
        interval_signs(&intervals, 2, 13),
    )
    .unwrap();
    let text6 = ispec.to_text();
    let back6 = IntervalSpec::from_text(&text6).unwrap();
    assert_eq!(back6.to_text(), text6);
    assert_eq!(back6.intervals(), ispec.intervals());
    assert_eq!(back6.lattice_offset(), ispec.lattice_offset());
    for &l in &ispec.packet_levels() {
        assert_eq!(back6.signs().sign(l as i32), ispec.signs().sign(l as i32));
    }
}

#[test]
fn malformed_spec_text_is_rejected() {
    let bad = [
        "levels=0,1\ns=0.5",                                     // missing keys
        "family=interval\nlevels=0,1\ns=0.5\nq=2\nalphas=0,1\nsigns=1,1", // wrong family
        "family=tower\nlevels=0,1\nlevels=2\ns=0\nq=2\nalphas=0,1\nsigns=1,1", // dup key
        "family=tower\nlevels=0,1\ns=0\nq=2\nalphas=0,1\nsigns=1",   // sign count
        "family=tower\nlevels=0,1\ns=0\nq=2\nalphas=0,1\nsigns=2,1", // bad sign value
        "family=tower\nlevels=0,x\ns=0\nq=2\nalphas=0,1\nsigns=1,1", // unparsable
        "no equals sign here",
    ];
    for text in bad {
        assert!(
            matches!(
                TowerSpec::from_text(text),
                Err(AdversarialError::SpecTextMalformed { .. })
            ),
            "accepted: {text:?}"
        );
    }
    assert!(matches!(
        IntervalSpec::from_text("family=interval\nlevels=4,5\nn=2\nintervals=4-5\nlattice_offset=4\nq=2\nsigns=1"),
        Err(AdversarialError::SpecTextMalformed { .. })
    ));
}

// --- frozen norm constants ---

/// Random admissible placements on the separation lattice (shared with the
/// survey example).
fn random_placements(
    rng: &mut ChaCha8Rng,
    j: u32,
    max_dil: u32,
    m: u32,
    unit_coeffs: bool,
) -> Vec<AtomPlacement> {
    let choices: Vec<u32> = (m..=max_dil).collect();
    let want = (1usize << m).max(2).min(choices.len());
    let mut levels = BTreeSet::new();
    while levels.len() < want {
        levels.insert(choices[rng.gen_range(0..choices.len())]);
    }
    levels
        .into_iter()
        .map(|l| {
            let bins = 1i64 << (l - m);
            let count = rng.gen_range(1..=(bins.min(8))) as usize;
            let mut chosen = BTreeSet::new();
            while chosen.len() < count {
                chosen.insert(rng.gen_range(0..bins));
            }
            let centers: Vec<i64> = chosen
                .iter()
                .map(|&b| b << (j as i64 + m as i64 - l as i64))
                .collect();
            let coeffs: Vec<f64> = (0..count)
                .map(|_| {
                    if unit_coeffs {
                        1.0
                    } else {
                        rng.gen_range(-1.0..=1.0)
                    }
                })
                .collect();
            AtomPlacement {
                level: l,
                centers,
                coeffs,
            }
        })
        .collect()
}

#[test]
fn indicator_profile_constants_are_frozen() {
    let g = grid(12);
    let max_dil = atom12().max_dilation();
    // Survey maxima over 100 draws: 1.1845, 1.3144, 1.0476.
    for &(p, q, cap) in &[(4.0, 2.0, 1.25), (6.0, 2.0, 1.40), (2.0, 3.0, 1.12)] {
        let mut rng = ChaCha8Rng::seed_from_u64(501);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let m = rng.gen_range(0..=2u32);
            let pl = random_placements(&mut rng, 12, max_dil, m, true);
            let lhs = indicator_profile_norm(&pl, g, p, q).unwrap();
            let rhs = (2f64.powi(-(m as i32)) * pl.len() as f64).powf(1.0 / q);
            worst = worst.max(lhs / rhs);
        }
        assert!(worst <= cap, "(p={p}, q={q}): constant grew to {worst}");
        assert!(worst > 0.5, "(p={p}, q={q}): vacuously small ({worst})");
    }
}

#[test]
fn atom_sum_norm_constants_are_frozen() {
    let g = grid(12);
    let atom = atom12();
    let bank = bank12();
    // Survey maxima over 100 draws: domination 6.8568 / 7.4358,
    // size law 4.5963 / 5.5084.
    for &(p, q, s, cap_dom, cap_size) in
        &[(4.0, 2.0, -0.6, 7.3, 4.9), (6.0, 2.0, -0.7, 7.9, 5.9)]
    {
        let params = TLParams::new(p, q, s, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(777);
        let mut worst_dom: f64 = 0.0;
        let mut worst_size: f64 = 0.0;
        for _ in 0..100 {
            let m = rng.gen_range(0..=2u32);
            let pl = random_placements(&mut rng, 12, atom.max_dilation(), m, false);
            let f = smooth_atom_sum(atom, g, m, &pl, s).unwrap();
            let norm = bank.f_norm(&f, &params).unwrap().value;
            let ind = indicator_profile_norm(&pl, g, p, q).unwrap();
            if ind > 1e-12 {
                worst_dom = worst_dom.max(norm / ind);
            }
            let rhs = (2f64.powi(-(m as i32)) * pl.len() as f64).powf(1.0 / q);
            worst_size = worst_size.max(norm / rhs);
        }
        assert!(worst_dom <= cap_dom, "domination constant grew to {worst_dom}");
        assert!(worst_size <= cap_size, "size-law constant grew to {worst_size}");
        assert!(worst_dom > 1.0 && worst_size > 1.0, "vacuously small");
    }
}

#[test]
fn tower_norm_constant_is_frozen() {
    // Survey maxima over 20 draws: 6.3053 (N=2, j=12), 4.4542 (N=3, j=16).
    for &(j, n_levels, alen, cap) in &[(12u32, 4usize, 3usize, 6.7), (16, 8, 4, 4.8)] {
        let g = grid(j);
        let atom = build_atom(2, 2f64.powi(-5), g).unwrap();
        let bank = build_filter_bank(g, 5, 0.5).unwrap();
        let params = TLParams::new(6.0, 2.0, -0.7, 8).unwrap();
        let levels: Vec<u32> = (0..n_levels as u32).collect();
        let mut alphas = vec![0.0; alen];
        for a in alphas.iter_mut().skip(1) {
            *a = 1.0;
        }
        let mut worst: f64 = 0.0;
        for draw in 0..20u64 {
            let signs = tower_signs(&levels, 2000 + draw);
            let spec = TowerSpec::new(levels.clone(), -0.7, 2.0, alphas.clone(), signs).unwrap();
            for n in 1..=spec.n() {
                let f = tower_component(&spec, &atom, g, n).unwrap();
                worst = worst.max(bank.f_norm(&f, &params).unwrap().value);
            }
        }
        assert!(worst <= cap, "N={} component norm grew to {worst}", alen - 1);
        assert!(worst > 1.0, "vacuously small ({worst})");
    }
}

#[test]
fn interval_norm_constant_is_frozen() {
    // Survey maxima over 20 draws: 2.0132 (N=2), 1.7572 (N=3); the bound
    // is C * N^{1/q}, so the per-N ratio stays flat as N grows.
    let cases: [(u32, u32, Option<u32>, Vec<u32>, Vec<(i64, i64)>, f64); 2] = [
        (14, 2, None, vec![4, 5, 6, 7], vec![(4, 5), (6, 7)], 2.2),
        (15, 3, Some(3), (2..=7).collect(), vec![(2, 4), (5, 7)], 1.9),
    ];
    for (j, n, offset, levels, intervals, cap) in cases {
        let g = grid(j);
        let atom = build_atom(2, 2f64.powi(-5), g).unwrap();
        let bank = build_filter_bank(g, 5, 0.5).unwrap();
        let params = TLParams::new(6.0, 2.0, -0.5, 8).unwrap();
        let mut worst: f64 = 0.0;
        for draw in 0..20u64 {
            let signs = interval_signs(&intervals, n, 3000 + draw);
            let spec = match offset {
                Some(c) => IntervalSpec::with_lattice_offset(
                    levels.clone(),
                    n,
                    intervals.clone(),
                    c,
                    2.0,
                    signs,
                )
                .unwrap(),
                None => {
                    IntervalSpec::new(levels.clone(), n, intervals.clone(), 2.0, signs).unwrap()
                }
            };
            let (f, _) = interval_function(&spec, &atom, g).unwrap();
            let ratio = bank.f_norm(&f, &params).unwrap().value / (n as f64).powf(0.5);
            worst = worst.max(ratio);
        }
        assert!(worst <= cap, "N={n} ratio grew to {worst}");
        assert!(worst > 0.5, "vacuously small ({worst})");
    }
}
