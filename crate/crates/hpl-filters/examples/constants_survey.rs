//! One-off survey of the measured constants the integration tests freeze.
//!
//! Run with `cargo run -p hpl-filters --example constants_survey`.  Each
//! section prints the raw measurements; the frozen bounds in the test
//! suite are these numbers with a ~5% headroom.

use hpl_core::bump::BumpDerivative;
use hpl_core::{
    analyze, lp_norm, pow2, sample_haar, synthesize, DyadicGrid, HaarIndex, HaarSubset,
    SampledFunction,
};
use hpl_filters::{build_filter_bank, FilterBank, TLParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn make_grid(j_max: u32, lo: i64, hi: i64) -> DyadicGrid {
    DyadicGrid::new(j_max, lo, hi).unwrap()
}

fn random_field(grid: DyadicGrid, seed: u64) -> SampledFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..grid.n_points()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SampledFunction::from_values(grid, values).unwrap()
}

fn centered_haar(grid: DyadicGrid, j: i32) -> SampledFunction {
    let mu = if j == 0 { 0 } else { 1i64 << (j - 1) };
    sample_haar(grid, HaarIndex::new(j, mu).unwrap()).unwrap()
}

fn size_laws(bank: &FilterBank) {
    let grid = bank.grid();
    let delta = grid.delta();
    println!("-- coarse-kernel size law: max|psi_k*h_j| * 2^(2(j-k)), 0 <= j-k <= 6");
    let mut overall: f64 = 0.0;
    for k in 0..=2i32 {
        for d in 0..=6i32 {
            let j = k + d;
            let h = centered_haar(grid, j);
            let v = bank.convolve_band(&h, k).unwrap();
            let m = v.values().iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            let c = m * pow2(2 * d);
            overall = overall.max(c);
            print!(" {c:.3}");
        }
        println!("   (k={k})");
    }
    println!("   max normalized sup: {overall:.4}");

    println!("-- support spill outside [y_lo - 2^-k, y_hi + 2^-k] (coarse kernel)");
    let mut spill: f64 = 0.0;
    for k in 0..=2i32 {
        for d in 0..=6i32 {
            let j = k + d;
            let mu = if j == 0 { 0 } else { 1i64 << (j - 1) };
            let h = sample_haar(grid, HaarIndex::new(j, mu).unwrap()).unwrap();
            let v = bank.convolve_band(&h, k).unwrap();
            let y_lo = mu as f64 * pow2(-j);
            let y_hi = (mu + 1) as f64 * pow2(-j);
            for (i, &val) in v.values().iter().enumerate() {
                let x = grid.left_endpoint(i);
                if x < y_lo - pow2(-k) || x > y_hi + pow2(-k) {
                    spill = spill.max(val.abs());
                }
            }
        }
    }
    println!("   max spill: {spill:.3e}");

    println!("-- fine-kernel size law: lp_norm(psi_k*h_j, p) * 2^(k/p), k >= j");
    for p in [1.0f64, 2.0, 4.0] {
        let mut overall: f64 = 0.0;
        for j in 0..=1i32 {
            for k in j..=(j + 6) {
                let h = centered_haar(grid, j);
                let v = bank.convolve_band(&h, k).unwrap();
                let c = lp_norm(&v, p).unwrap() * 2.0f64.powf(k as f64 / p);
                overall = overall.max(c);
            }
        }
        println!("   p={p}: max normalized norm {overall:.4}");
    }

    println!("-- fine-kernel exact zeros: max |psi_k*h_j| at distance >= 2^-k from breakpoints");
    let mut worst: f64 = 0.0;
    for j in 0..=1i32 {
        for k in j..=(j + 6) {
            let mu = if j == 0 { 0 } else { 1i64 << (j - 1) };
            let h = sample_haar(grid, HaarIndex::new(j, mu).unwrap()).unwrap();
            let v = bank.convolve_band(&h, k).unwrap();
            let breaks = [
                mu as f64 * pow2(-j),
                (2 * mu + 1) as f64 * pow2(-j - 1),
                (mu + 1) as f64 * pow2(-j),
            ];
            for (i, &val) in v.values().iter().enumerate() {
                let x = grid.left_endpoint(i) + 0.5 * delta;
                if breaks.iter().all(|&b| (x - b).abs() >= pow2(-k)) {
                    worst = worst.max(val.abs());
                }
            }
        }
    }
    println!("   max far-field value: {worst:.3e}");
}

fn tkmn_decay() {
    println!("-- decay table: ||T^0_{{m,n}} f||_2 * 2^(n/2) * 2^m / ||f||_2, (m,n) in [0,5]^2");
    let grid = make_grid(14, -1, 2);
    let bank = build_filter_bank(grid, 5, 0.5).unwrap();
    let subset = HaarSubset::full_levels(&[0, 1, 2, 3, 4, 5]);
    let f = random_field(grid, 1207);
    let fn2 = lp_norm(&f, 2.0).unwrap();
    let mut cmax: f64 = 0.0;
    for m in 0..=5i32 {
        for n in 0..=5i32 {
            let t = bank.tkmn_component(&f, &subset, 0, m, n).unwrap();
            let c = lp_norm(&t, 2.0).unwrap() * 2.0f64.powf(n as f64 / 2.0 + m as f64) / fn2;
            print!(" {c:.3}");
            cmax = cmax.max(c);
        }
        println!("   (m={m})");
    }
    println!("   max C: {cmax:.4}");
}

fn tkmn_consistency() {
    println!("-- reconstruction consistency");
    let grid = make_grid(10, -1, 2);
    let bank = build_filter_bank(grid, 5, 0.5).unwrap();
    let subset = HaarSubset::full_levels(&[2, 4]);
    let s = 0.3f64;
    let k = 1i32;
    let fields: Vec<SampledFunction> = (0..=6).map(|l| random_field(grid, 40 + l)).collect();
    let lhs = bank.tkmn_reconstruct(&fields, &subset, k, s).unwrap();
    // rhs = 2^{ks} psi_k * P_E ( sum_l 2^{-ls} psi_l * f_l )
    let mut acc = SampledFunction::zeros(grid);
    for (l, fl) in fields.iter().enumerate() {
        let conv = bank.convolve_scaled(fl, l as i32).unwrap();
        acc.axpy(2.0f64.powf(-s * l as f64), &conv).unwrap();
    }
    let coeffs = hpl_core::analyze_subset(&acc, &subset).unwrap();
    let proj = synthesize(&coeffs);
    let mut rhs = bank.convolve_scaled(&proj, k).unwrap();
    rhs.scale(2.0f64.powf(s * k as f64));
    let diff = SampledFunction::difference(&lhs, &rhs).unwrap().linf_norm();
    println!("   max |lhs - rhs| = {diff:.3e}");
}

fn monotonicity() {
    println!("-- removal monotonicity (value after minus before; negative = monotone)");
    let grid = make_grid(10, -1, 2);
    let bank = build_filter_bank(grid, 5, 0.5).unwrap();
    let l2 = TLParams::new(2.0, 2.0, 0.0, 6).unwrap();
    let other = TLParams::new(2.5, 2.0, 0.3, 6).unwrap();
    for seed in 0..8u64 {
        let f = random_field(grid, 900 + seed);
        let coeffs = analyze(&f, &[0, 1, 2, 3, 4, 5, 6]).unwrap();
        // (a) remove the largest coefficient; (b) remove all of level 3.
        let (&idx, &c) = coeffs
            .iter()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        let single = {
            let mut g = f.clone();
            let h = sample_haar(grid, idx).unwrap();
            g.axpy(-c, &h).unwrap();
            g
        };
        let level = {
            let mut g = f.clone();
            for (&i, &v) in coeffs.iter() {
                if i.j == 3 {
                    let h = sample_haar(grid, i).unwrap();
                    g.axpy(-v, &h).unwrap();
                }
            }
            g
        };
        let base2 = bank.f_norm(&f, &l2).unwrap().value;
        let base_o = bank.f_norm(&f, &other).unwrap().value;
        let d_single2 = bank.f_norm(&single, &l2).unwrap().value - base2;
        let d_level2 = bank.f_norm(&level, &l2).unwrap().value - base2;
        let d_single_o = bank.f_norm(&single, &other).unwrap().value - base_o;
        let d_level_o = bank.f_norm(&level, &other).unwrap().value - base_o;
        println!(
            "   seed {seed}: L2 single {d_single2:+.3e} level {d_level2:+.3e} | (2.5,2,.3) single {d_single_o:+.3e} level {d_level_o:+.3e}"
        );
    }
}

/// Naive norm evaluation: raw-sampled kernels, plain loops, direct sums.
fn naive_norm(
    grid: DyadicGrid,
    f: &SampledFunction,
    m1: usize,
    radius_log2: i32,
    p: f64,
    q: f64,
    s: f64,
    k_max: i32,
) -> f64 {
    let j_max = grid.j_max();
    let delta = grid.delta();
    let n_pts = grid.n_points();
    let profile = BumpDerivative::new(m1 + 1);
    let bump = BumpDerivative::new(0);
    let mut w = vec![0.0f64; n_pts];
    for k in 0..=k_max {
        let n = 1usize << (j_max as i32 - k + 1 + radius_log2);
        let scale = pow2(k - j_max as i32 - 1 - radius_log2);
        let xi: Vec<f64> = (0..n)
            .map(|m| (2 * m as i64 + 1 - n as i64) as f64 * scale)
            .collect();
        let taps: Vec<f64> = if k == 0 {
            let raw: Vec<f64> = xi.iter().map(|&u| bump.eval(u)).collect();
            let mass: f64 = raw.iter().sum::<f64>() * delta;
            raw.iter().map(|v| v / mass).collect()
        } else {
            // Moment correction is part of the kernel definition, so the
            // oracle keeps it; only sampling, convolution, and the norm
            // assembly are reimplemented.  Under-resolved truncation scales
            // (fewer taps than constraints) get as many orders as the tap
            // count supports.
            let raw: Vec<f64> = xi.iter().map(|&u| profile.eval(u)).collect();
            let peak = raw.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            let mut vals: Vec<f64> = raw.iter().map(|v| v / peak).collect();
            let orders: Vec<usize> = (0..=m1.min(n.saturating_sub(2))).collect();
            hpl_core::moments::zero_discrete_moments(&mut vals, &xi, &orders).unwrap();
            vals.iter().map(|v| v * pow2(k)).collect()
        };
        let mut out = vec![0.0f64; n_pts];
        let shift = n as i64 / 2 - 1;
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (m, &t) in taps.iter().enumerate() {
                let src = i as i64 - m as i64 + shift;
                if src >= 0 && (src as usize) < n_pts {
                    acc += t * f.values()[src as usize];
                }
            }
            *o = acc * delta;
        }
        let weight = 2.0f64.powf(k as f64 * s);
        for (wi, &o) in w.iter_mut().zip(out.iter()) {
            *wi += (weight * o.abs()).powf(q);
        }
    }
    let total: f64 = w.iter().map(|x| x.powf(p / q)).sum::<f64>() * delta;
    total.powf(1.0 / p)
}

fn norm_oracles() {
    println!("-- h_{{3,0}} norm, (2,2,0.25), k_max=10");
    let grid14 = make_grid(14, -1, 2);
    let bank14 = build_filter_bank(grid14, 5, 0.5).unwrap();
    let params = TLParams::new(2.0, 2.0, 0.25, 10).unwrap();
    let h14 = sample_haar(grid14, HaarIndex::new(3, 0).unwrap()).unwrap();
    let v14 = bank14.f_norm(&h14, &params).unwrap().value;
    let naive14 = naive_norm(grid14, &h14, 5, -1, 2.0, 2.0, 0.25, 10);
    let grid12 = make_grid(12, -1, 2);
    let h12 = sample_haar(grid12, HaarIndex::new(3, 0).unwrap()).unwrap();
    let naive12 = naive_norm(grid12, &h12, 5, -1, 2.0, 2.0, 0.25, 10);
    println!("   library j14: {v14:.9}");
    println!(
        "   naive j14:   {naive14:.9}  (rel diff {:.3e})",
        (naive14 - v14).abs() / v14
    );
    println!(
        "   naive j12:   {naive12:.9}  (rel diff {:.3e})",
        (naive12 - v14).abs() / v14
    );
}

fn response_identity() {
    for (j_max, radius, label) in [(14u32, 0.0625, "r=2^-4"), (14, 0.5, "r=1/2")] {
        let grid = make_grid(j_max, -1, 2);
        let bank = build_filter_bank(grid, 5, radius).unwrap();
        let h = sample_haar(grid, HaarIndex::new(0, 0).unwrap()).unwrap();
        let v = bank.convolve_band(&h, 0).unwrap();
        let i0 = 1i64 << j_max; // x = 0
        let half = 1i64 << (j_max - 1);
        let quarter = 1i64 << (j_max - 2);
        let mut worst: f64 = 0.0;
        for q in quarter..=3 * quarter {
            let i = (i0 + q) as usize;
            let pred = -2.0 * bank.primitive_at(q - half);
            worst = worst.max((v.values()[i] - pred).abs());
        }
        println!("-- response identity on [1/4,3/4], {label}: max err {worst:.3e}");
    }
}

fn covariance() {
    println!("-- cross-grid covariance (fine j=12 scale 4 vs coarse j=8 scale 0)");
    let fine = make_grid(12, 0, 1);
    let coarse = make_grid(8, 0, 1);
    let bf = build_filter_bank(fine, 5, 0.5).unwrap();
    let bc = build_filter_bank(coarse, 5, 0.5).unwrap();
    let tf = bf.band_taps(4).unwrap();
    let tc = bc.band_taps(0).unwrap();
    let same_taps = tf.len() == tc.len()
        && tf
            .iter()
            .zip(tc.iter())
            .all(|(&a, &b)| a.to_bits() == (b * 16.0).to_bits());
    let hf = sample_haar(fine, HaarIndex::new(4, 0).unwrap()).unwrap();
    let hc = sample_haar(coarse, HaarIndex::new(0, 0).unwrap()).unwrap();
    let vf = bf.convolve_band(&hf, 4).unwrap();
    let vc = bc.convolve_band(&hc, 0).unwrap();
    let mut exact = true;
    for i in 0..coarse.n_points() {
        if vf.values()[i] != vc.values()[i] {
            exact = false;
        }
    }
    println!("   taps bitwise (x16): {same_taps}; conv values equal on aligned range: {exact}");
}

fn calibration_translates() {
    println!("-- calibration floor at translates (min |v| / c0 over J_k,mu)");
    let grid = make_grid(12, -1, 2);
    let bank = build_filter_bank(grid, 5, 0.5).unwrap();
    let cal = bank.calibration();
    println!(
        "   c0 {:.3e} J [{:.4},{:.4}] margin {} scales {}",
        cal.c0, cal.j_lo, cal.j_hi, cal.margin, cal.scales_checked
    );
    let j_max = grid.j_max() as i64;
    for (k, mu) in [(0i32, 0i64), (0, -1), (2, 0), (2, 1), (5, 3), (8, 0)] {
        let h = sample_haar(grid, HaarIndex::new(k, mu).unwrap()).unwrap();
        let v = bank.convolve_band(&h, k).unwrap();
        // grid points with x in 2^-k (mu + J)
        let base = (mu as f64 + 0.0) * pow2(-k);
        let lo = ((base + cal.j_lo * pow2(-k)) / grid.delta()).ceil() as i64;
        let hi = ((base + cal.j_hi * pow2(-k)) / grid.delta()).floor() as i64;
        let i0 = 1i64 << j_max;
        if lo > hi {
            println!("   k={k} mu={mu}: unresolved");
            continue;
        }
        let mut min_ratio = f64::INFINITY;
        for q in lo..=hi {
            let i = (i0 + q) as usize;
            min_ratio = min_ratio.min(v.values()[i].abs() / cal.c0);
        }
        println!("   k={k} mu={mu}: min |v|/c0 = {min_ratio:.6} over {} pts", hi - lo + 1);
    }
}

fn main() {
    let grid = make_grid(12, -1, 2);
    let bank = build_filter_bank(grid, 5, 0.5).unwrap();
    size_laws(&bank);
    tkmn_consistency();
    tkmn_decay();
    monotonicity();
    norm_oracles();
    response_identity();
    covariance();
    calibration_translates();
}
