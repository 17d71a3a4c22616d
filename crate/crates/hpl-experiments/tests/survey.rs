//! Manual survey runs used to size experiment defaults and tolerances.
//! All tests here are `#[ignore]`: run explicitly with
//! `cargo test -p hpl-experiments --test survey -- --ignored --nocapture`.

use hpl_experiments::{
    endpoint_contrast, growth_curve, CandidateFamily, ExperimentConfig, SetBuilder,
};

fn growth_table(p: f64, q: f64, s: f64, families: Vec<CandidateFamily>, j: u32, samples: u32) {
    let mut cfg = ExperimentConfig::new(p, q, s).unwrap();
    cfg.families = families;
    cfg.j_max = Some(j);
    cfg.samples = samples;
    cfg.n_lo = 3;
    cfg.n_hi = 8;
    match growth_curve(&cfg) {
        Ok(report) => {
            println!("--- ({p},{q},{s}) j={j} ---");
            println!("{}", report.to_csv());
        }
        Err(e) => println!("--- ({p},{q},{s}) j={j} --- error: {e}"),
    }
}

#[test]
#[ignore]
fn survey_growth_negative_band() {
    for j in [12, 14, 16] {
        growth_table(6.0, 2.0, -0.7, vec![CandidateFamily::Tower], j, 8);
    }
}

#[test]
#[ignore]
fn survey_growth_depth_fixed() {
    // Hold the ladder depth fixed across rows to see the pure level-count
    // dependence.
    for depth in [2u32, 3, 4] {
        let mut cfg = ExperimentConfig::new(6.0, 2.0, -0.7).unwrap();
        cfg.families = vec![CandidateFamily::Tower];
        cfg.j_max = Some(14);
        cfg.samples = 8;
        cfg.n_lo = 3;
        cfg.n_hi = 8;
        cfg.ladder_depth = Some(depth);
        match growth_curve(&cfg) {
            Ok(report) => {
                println!("--- depth={depth} ---");
                println!("{}", report.to_csv());
            }
            Err(e) => println!("--- depth={depth} --- error: {e}"),
        }
    }
}

#[test]
#[ignore]
fn survey_growth_all_families() {
    growth_table(
        6.0,
        2.0,
        -0.7,
        vec![
            CandidateFamily::Tower,
            CandidateFamily::Interval,
            CandidateFamily::AtomSum,
            CandidateFamily::Bandlimited,
        ],
        14,
        8,
    );
}

#[test]
#[ignore]
fn survey_controls() {
    growth_table(
        3.0,
        2.0,
        0.0,
        vec![
            CandidateFamily::Tower,
            CandidateFamily::AtomSum,
            CandidateFamily::Bandlimited,
        ],
        12,
        8,
    );
    growth_table(
        2.0,
        3.0,
        0.2,
        vec![
            CandidateFamily::Tower,
            CandidateFamily::AtomSum,
            CandidateFamily::Bandlimited,
        ],
        12,
        8,
    );
}

#[test]
#[ignore]
fn survey_separated_tower() {
    let mut cfg = ExperimentConfig::new(6.0, 2.0, -0.5).unwrap();
    cfg.families = vec![CandidateFamily::Tower];
    cfg.set_builder = SetBuilder::Separated;
    cfg.j_max = Some(14);
    cfg.samples = 8;
    cfg.n_lo = 4;
    cfg.n_hi = 8;
    match growth_curve(&cfg) {
        Ok(report) => println!("{}", report.to_csv()),
        Err(e) => println!("error: {e}"),
    }
}

#[test]
#[ignore]
fn survey_endpoint_contrast() {
    let base = ExperimentConfig::new(6.0, 2.0, -0.5).unwrap();
    let mut base = base;
    base.samples = 4;
    match endpoint_contrast(6.0, 2.0, 4, 8, &base) {
        Ok(report) => println!("{}", report.to_csv()),
        Err(e) => println!("error: {e}"),
    }
}
