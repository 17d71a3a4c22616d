use hpl_experiments::{growth_curve, CandidateFamily, ExperimentConfig};
fn main() {
    for j in [12u32, 14] {
        let mut cfg = ExperimentConfig::new(6.0, 2.0, -0.7).unwrap();
        cfg.families = vec![CandidateFamily::Tower];
        cfg.j_max = Some(j);
        cfg.samples = 32;
        cfg.n_lo = 3;
        cfg.n_hi = 8;
        match growth_curve(&cfg) {
            Ok(r) => {
                println!("=== j={j} samples=32 ===");
                for row in &r.rows {
                    println!("N={} gamma={:.6} family={} seed={}", row.n, row.gamma_hat, row.family, row.seed);
                }
                if let Some(f) = &r.fit {
                    println!("slope={:.4} r2={:.4}", f.slope, f.r2);
                }
            }
            Err(e) => println!("j={j} error: {e}"),
        }
    }
}
