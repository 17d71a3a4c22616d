//! Print construction diagnostics for a filter bank: kernel sizes, moment
//! residuals, and the calibration certificate.
//!
//! Usage: `cargo run -p hpl-filters --example bank_report [j_max] [m1] [radius]`

use hpl_core::DyadicGrid;
use hpl_filters::build_filter_bank;

fn main() {
    let mut args = std::env::args().skip(1);
    let j_max: u32 = args.next().map_or(12, |a| a.parse().expect("j_max"));
    let m1: usize = args.next().map_or(5, |a| a.parse().expect("m1"));
    let radius: f64 = args.next().map_or(0.5, |a| a.parse().expect("radius"));

    let grid = DyadicGrid::new(j_max, -1, 2).expect("grid");
    let bank = match build_filter_bank(grid, m1, radius) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("bank construction failed: {e}");
            std::process::exit(1);
        }
    };
    println!(
        "bank: j_max={} m1={} radius={} max_scale={}",
        j_max,
        m1,
        bank.support_radius(),
        bank.max_scale()
    );
    println!("max dimensionless moment residual: {:.3e}", bank.max_moment_resid());
    let cal = bank.calibration();
    println!(
        "calibration: c0={:.6} peak={:.6} J=[{:.6}, {:.6}] width={:.6} margin={} scales={}",
        cal.c0,
        cal.peak,
        cal.j_lo,
        cal.j_hi,
        cal.j_hi - cal.j_lo,
        cal.margin,
        cal.scales_checked
    );
    let fc = bank.fourier_check();
    println!(
        "fourier: eps={} band_floor={:.3e} lowpass_floor={:.3e}",
        fc.eps, fc.band_floor, fc.lowpass_floor
    );
    for k in [0i32, 1, bank.max_scale() as i32] {
        let taps = bank.band_taps(k).unwrap();
        let peak = taps.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        println!("band k={k}: taps={} peak={:.3e}", taps.len(), peak);
    }
    println!("lowpass taps: {}", bank.lowpass_taps().len());
}
