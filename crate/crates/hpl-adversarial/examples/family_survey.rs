//! Measurement pass for the structured families: prints the atom's
//! certification numbers, the exact-coefficient identities, and the norm
//! constants the contract tests freeze.
//!
//! Run with `cargo run -p hpl-adversarial --release --example family_survey`.

use std::collections::BTreeSet;

use hpl_adversarial::{
    build_atom, indicator_profile_norm, interval_signs, tower_component, tower_function,
    interval_function, interval_packet, smooth_atom_sum, tower_signs, Atom, AtomPlacement,
    TowerSpec, IntervalSpec,
};
use hpl_core::{analyze, dyadic_sum, DyadicGrid, HaarIndex, SampledFunction};
use hpl_filters::{build_filter_bank, FilterBank, TLParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid(j: u32) -> DyadicGrid {
    DyadicGrid::new(j, -1, 2).unwrap()
}

fn coeff(f: &SampledFunction, j: i32, mu: i64) -> f64 {
    analyze(f, &[j])
        .unwrap()
        .get(&HaarIndex::new(j, mu).unwrap())
        .unwrap_or(0.0)
}

/// One midpoint-centered atom copy eta(2^{k+n}(x - mid_{k,mu})).
fn single_tower_atom(atom: &Atom, g: DyadicGrid, k: u32, n: u32, mu: i64) -> SampledFunction {
    let center = (2 * mu + 1) << (g.j_max() - k - 1);
    let placements = vec![AtomPlacement {
        level: k + n,
        centers: vec![center],
        coeffs: vec![1.0],
    }];
    smooth_atom_sum(atom, g, 0, &placements, 0.0).unwrap()
}

fn main() {
    let g12 = grid(12);
    let atom = build_atom(2, 2f64.powi(-5), g12).unwrap();
    println!("== atom (m0=2, r=2^-5, j=12) ==");
    println!(
        "max_dilation={} constraint_resid={:.3e} half_mass={}",
        atom.max_dilation(),
        atom.constraint_resid(),
        atom.half_mass()
    );
    let prof = atom.profile();
    let pg = prof.grid();
    for m in 0..=3 {
        let terms: Vec<f64> = prof
            .values()
            .iter()
            .enumerate()
            .map(|(i, &v)| v * pg.left_endpoint(i).powi(m))
            .collect();
        println!("  moment {m}: {:+.3e}", dyadic_sum(&terms) * pg.delta());
    }

    println!("\n== single-atom tower identity (2^k c = -2^-n) ==");
    let mut worst: f64 = 0.0;
    for k in 0u32..=5 {
        for n in 1u32..=3 {
            if k + n > atom.max_dilation() {
                continue;
            }
            for &mu in &[0i64, (1i64 << k) / 2, (1i64 << k) - 1] {
                let f = single_tower_atom(&atom, g12, k, n, mu);
                let got = coeff(&f, k as i32, mu);
                worst = worst.max((got - -(2f64.powi(-(n as i32)))).abs());
                // same-level neighbors see exactly nothing
                for &other in &[mu - 1, mu + 1] {
                    if other >= 0 && other < (1i64 << k) && other != mu {
                        let off = coeff(&f, k as i32, other);
                        assert_eq!(off, 0.0, "neighbor translate leaked");
                    }
                }
            }
        }
    }
    println!("  worst |c - pred| over (k,n,mu) = {:.3e}", worst);

    println!("\n== assembled tower at the coarsest level ==");
    let levels = vec![1u32, 2, 3, 4];
    let signs = tower_signs(&levels, 17);
    let spec = TowerSpec::new(levels.clone(), -0.7, 2.0, vec![0.0, 1.0, 0.8], signs).unwrap();
    let nn = spec.n() as f64;
    let k0 = levels[0];
    let mut worst_c: f64 = 0.0;
    for n in 1..=spec.n() {
        let f = tower_component(&spec, &atom, g12, n).unwrap();
        let pred = 2f64.powf(-nn / spec.q())
            * spec.signs().sign(k0 as i32)
            * 2f64.powf(-(k0 as f64) * spec.s())
            * 2f64.powf(n as f64 * (-spec.s() + 1.0 / spec.q()))
            * -(2f64.powf(-(n as f64)));
        for mu in 0..(1i64 << k0) {
            worst_c = worst_c.max((coeff(&f, k0 as i32, mu) - pred).abs());
        }
    }
    println!("  components: worst |c - pred| = {:.3e}", worst_c);
    // linearity in alphas
    let spec_a =
        TowerSpec::new(levels.clone(), -0.7, 2.0, vec![0.0, 2.0, 0.0], spec.signs().clone())
            .unwrap();
    let f_a = tower_function(&spec_a, &atom, g12).unwrap();
    let f_1 = tower_component(&spec, &atom, g12, 1).unwrap();
    let mut d = f_a.clone();
    d.axpy(-2.0, &f_1).unwrap();
    println!("  linearity residual linf = {:.3e}", d.linf_norm());

    println!("\n== interval family identity ==");
    let signs6 = interval_signs(&[(4, 5)], 2, 23);
    let ispec = IntervalSpec::new(vec![4u32, 5], 2, vec![(4, 5)], 2.0, signs6).unwrap();
    let h = interval_packet(&ispec, &atom, g12, 0).unwrap();
    let subset = ispec.index_set(g12).unwrap();
    let mut worst6: f64 = 0.0;
    for idx in subset.iter() {
        let pred = 2.0 * 2f64.powi(idx.j - 5 - 2) * 0.5;
        worst6 = worst6.max((coeff(&h, idx.j, idx.mu) - pred).abs());
    }
    println!(
        "  packet diagonal: worst |c - pred| = {:.3e} over {} lattice points",
        worst6,
        subset.len()
    );
    let (f6, subset6) = interval_function(&ispec, &atom, g12).unwrap();
    let mut worst6f: f64 = 0.0;
    for idx in subset6.iter() {
        let pred = ispec.signs().sign(7)
            * 2f64.powf(7.0 * 0.5)
            * 2.0
            * 2f64.powi(idx.j - 5 - 2)
            * 0.5;
        worst6f = worst6f.max((coeff(&f6, idx.j, idx.mu) - pred).abs());
    }
    println!("  signed function: worst |c - pred| = {:.3e}", worst6f);

    println!("\n== norm constants ==");
    measure_placement_constants();
    measure_tower_norms();
    measure_interval_norms();
}

/// Random admissible placement family on the bin lattice: levels in
/// `[m, max_dil]`, centers at multiples of the separation width.
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

fn bank12() -> (DyadicGrid, FilterBank) {
    let g = grid(12);
    (g, build_filter_bank(g, 5, 0.5).unwrap())
}

fn measure_placement_constants() {
    let (g, bank) = bank12();
    let atom = build_atom(2, 2f64.powi(-5), g).unwrap();
    let max_dil = atom.max_dilation();
    for &(p, q) in &[(4.0, 2.0), (6.0, 2.0), (2.0, 3.0)] {
        let mut rng = ChaCha8Rng::seed_from_u64(501);
        let mut c_ind: f64 = 0.0;
        for _ in 0..100 {
            let m = rng.gen_range(0..=2u32);
            let pl = random_placements(&mut rng, 12, max_dil, m, true);
            let lhs = indicator_profile_norm(&pl, g, p, q).unwrap();
            let rhs = (2f64.powi(-(m as i32)) * pl.len() as f64).powf(1.0 / q);
            c_ind = c_ind.max(lhs / rhs);
        }
        println!("  indicator-profile constant (p={p}, q={q}): {:.4}", c_ind);
    }
    for &(p, q, s) in &[(4.0, 2.0, -0.6), (6.0, 2.0, -0.7)] {
        let params = TLParams::new(p, q, s, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(777);
        let mut c_dom: f64 = 0.0;
        let mut c_size: f64 = 0.0;
        for _ in 0..100 {
            let m = rng.gen_range(0..=2u32);
            let pl = random_placements(&mut rng, 12, max_dil, m, false);
            let f = smooth_atom_sum(&atom, g, m, &pl, s).unwrap();
            let norm = bank.f_norm(&f, &params).unwrap().value;
            let ind = indicator_profile_norm(&pl, g, p, q).unwrap();
            if ind > 1e-12 {
                c_dom = c_dom.max(norm / ind);
            }
            let rhs = (2f64.powi(-(m as i32)) * pl.len() as f64).powf(1.0 / q);
            c_size = c_size.max(norm / rhs);
        }
        println!(
            "  atom-sum domination (p={p}, q={q}, s={s}): {:.4}; size-law: {:.4}",
            c_dom, c_size
        );
    }
}

fn measure_tower_norms() {
    // N = 2 at j = 12 and N = 3 at j = 16, (p,q,s) = (6,2,-0.7).
    for &(j, n_levels, alen) in &[(12u32, 4usize, 3usize), (16, 8, 4)] {
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
            let spec =
                TowerSpec::new(levels.clone(), -0.7, 2.0, alphas.clone(), signs).unwrap();
            for n in 1..=spec.n() {
                let f = tower_component(&spec, &atom, g, n).unwrap();
                worst = worst.max(bank.f_norm(&f, &params).unwrap().value);
            }
        }
        println!(
            "  tower component norm  (N={}, j={j}): max over draws = {:.4}",
            alen - 1,
            worst
        );
    }
}

fn measure_interval_norms() {
    // (p,q) = (6,2), s = -1/q' = -1/2; ratio against N^{1/q}.
    let cases: [(u32, u32, Option<u32>, Vec<u32>, Vec<(i64, i64)>); 2] = [
        (14, 2, None, vec![4, 5, 6, 7], vec![(4, 5), (6, 7)]),
        (15, 3, Some(3), (2..=7).collect(), vec![(2, 4), (5, 7)]),
    ];
    for (j, n, offset, levels, intervals) in cases {
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
                None => IntervalSpec::new(levels.clone(), n, intervals.clone(), 2.0, signs)
                    .unwrap(),
            };
            let (f, _) = interval_function(&spec, &atom, g).unwrap();
            let ratio = bank.f_norm(&f, &params).unwrap().value / (n as f64).powf(0.5);
            worst = worst.max(ratio);
        }
        println!(
            "  interval norm ratio   (N={n}, j={j}): max over draws = {:.4}",
            worst
        );
    }
}
