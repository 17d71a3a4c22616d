//! Property tests for the structured families: linearity, homogeneity,
//! and the atom coefficient identity at randomly drawn positions.

use std::sync::OnceLock;

use hpl_adversarial::{
    build_atom, indicator_profile_norm, tower_function, smooth_atom_sum, tower_signs, Atom,
    AtomPlacement, TowerSpec,
};
use hpl_core::{analyze, DyadicGrid, HaarIndex, SampledFunction};
use proptest::prelude::*;

fn grid12() -> DyadicGrid {
    DyadicGrid::new(12, -1, 2).unwrap()
}

static ATOM12: OnceLock<Atom> = OnceLock::new();
fn atom12() -> &'static Atom {
    ATOM12.get_or_init(|| build_atom(2, 2f64.powi(-5), grid12()).unwrap())
}

/// Distinct separated centers for one level: bins on the lattice
/// 2^{j+m-l}, at most 2^{l-m} of them.
fn placement_strategy() -> impl Strategy<Value = (u32, AtomPlacement)> {
    (0u32..=2)
        .prop_flat_map(|m| {
            ((m.max(1))..=5u32, Just(m)).prop_flat_map(move |(l, m)| {
                let bins = 1i64 << (l - m);
                (
                    Just(m),
                    Just(l),
                    proptest::collection::btree_set(0..bins, 1..=(bins.min(6) as usize)),
                )
            })
        })
        .prop_flat_map(|(m, l, bins)| {
            let count = bins.len();
            (
                Just(m),
                Just(l),
                Just(bins),
                proptest::collection::vec(-1.0f64..=1.0, count),
            )
        })
        .prop_map(|(m, l, bins, coeffs)| {
            let centers: Vec<i64> = bins
                .into_iter()
                .map(|b| b << (12 + m as i64 - l as i64))
                .collect();
            (
                m,
                AtomPlacement {
                    level: l,
                    centers,
                    coeffs,
                },
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn atom_sum_is_homogeneous_in_the_coefficients(
        (m, pl) in placement_strategy(),
        c in -1.0f64..=1.0,
    ) {
        let atom = atom12();
        let g = grid12();
        let scaled = AtomPlacement {
            level: pl.level,
            centers: pl.centers.clone(),
            coeffs: pl.coeffs.iter().map(|a| c * a).collect(),
        };
        // A single level never trips the 2^m family-size floor at m = 0;
        // pad with zero-coefficient levels for m > 0.
        let mut base = vec![pl.clone()];
        let mut with_scale = vec![scaled];
        for level in (m..=6).filter(|&l| l != pl.level).take((1usize << m) - 1) {
            let filler = AtomPlacement {
                level,
                centers: vec![0],
                coeffs: vec![0.0],
            };
            base.push(filler.clone());
            with_scale.push(filler);
        }
        let f = smooth_atom_sum(atom, g, m, &base, -0.4).unwrap();
        let fc = smooth_atom_sum(atom, g, m, &with_scale, -0.4).unwrap();
        let mut expect = f.clone();
        expect.scale(c);
        let d = SampledFunction::difference(&fc, &expect).unwrap();
        prop_assert!(d.linf_norm() <= 1e-12 * (1.0 + f.linf_norm()));
    }

    #[test]
    fn indicator_profile_scales_with_the_coefficients(
        (_, pl) in placement_strategy(),
        c in 0.125f64..=1.0,
    ) {
        let g = grid12();
        let scaled = AtomPlacement {
            level: pl.level,
            centers: pl.centers.clone(),
            coeffs: pl.coeffs.iter().map(|a| c * a).collect(),
        };
        let base = indicator_profile_norm(std::slice::from_ref(&pl), g, 4.0, 2.0).unwrap();
        let got = indicator_profile_norm(&[scaled], g, 4.0, 2.0).unwrap();
        prop_assert!((got - c * base).abs() <= 1e-12 * (1.0 + base));
    }

    #[test]
    fn tower_atom_identity_holds_at_random_positions(
        k in 0u32..=4,
        n in 1u32..=2,
        mu_raw in 0i64..16,
    ) {
        let atom = atom12();
        let g = grid12();
        let mu = mu_raw % (1i64 << k);
        let center = (2 * mu + 1) << (g.j_max() - k - 1);
        let placements = vec![AtomPlacement {
            level: k + n,
            centers: vec![center],
            coeffs: vec![1.0],
        }];
        let f = smooth_atom_sum(atom, g, 0, &placements, 0.0).unwrap();
        let got = analyze(&f, &[k as i32])
            .unwrap()
            .get(&HaarIndex::new(k as i32, mu).unwrap())
            .unwrap_or(0.0);
        prop_assert!((got + 2f64.powi(-(n as i32))).abs() <= 1e-12);
    }

    #[test]
    fn tower_function_scales_with_a_global_alpha_factor(
        c in 0.25f64..=1.0,
        seed in 0u64..1000,
    ) {
        let atom = atom12();
        let g = grid12();
        let levels = vec![0u32, 1, 2, 3];
        let signs = tower_signs(&levels, seed);
        let mk = |scale: f64| {
            TowerSpec::new(
                levels.clone(),
                -0.5,
                2.0,
                vec![0.0, scale, 0.5 * scale],
                signs.clone(),
            )
            .unwrap()
        };
        let f = tower_function(&mk(1.0), atom, g).unwrap();
        let fc = tower_function(&mk(c), atom, g).unwrap();
        let mut expect = f.clone();
        expect.scale(c);
        let d = SampledFunction::difference(&fc, &expect).unwrap();
        prop_assert!(d.linf_norm() <= 1e-12 * (1.0 + f.linf_norm()));
    }
}
