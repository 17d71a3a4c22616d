use hpl_adversarial::{build_atom, tower_component, tower_function, tower_signs, TowerSpec};
use hpl_core::haar::{project, split_by_sign};
use hpl_core::{DyadicGrid, HaarSubset, SampledFunction};
use hpl_filters::{build_filter_bank, FilterBank, TLParams};

fn value(
    f: &SampledFunction,
    e: &HaarSubset,
    signs: &hpl_core::haar::SignAssignment,
    bank: &FilterBank,
    params: &TLParams,
) -> (f64, f64, f64, f64) {
    let denom = bank.f_norm(f, params).unwrap().value;
    let (ep, em) = split_by_sign(e, signs);
    let fp = project(f, &ep).unwrap();
    let np = bank.f_norm(&fp, params).unwrap().value;
    let (nm, nt);
    if em.is_empty() {
        nm = 0.0;
        nt = np;
    } else {
        let fm = project(f, &em).unwrap();
        nm = bank.f_norm(&fm, params).unwrap().value;
        let diff = SampledFunction::difference(&fp, &fm).unwrap();
        nt = bank.f_norm(&diff, params).unwrap().value;
    }
    (denom, np, nm, (np.max(nm).max(nt / 2.0)) / denom)
}

fn main() {
    let j = 14u32;
    let grid = DyadicGrid::new(j, -1, 2).unwrap();
    let bank = build_filter_bank(grid, 5, 0.5).unwrap();
    let params = TLParams::new(6.0, 2.0, -0.7, 8).unwrap();
    let atom = build_atom(2, 0.03125, grid).unwrap();
    let set_levels: Vec<u32> = (0..=9).collect(); // full:0..9 row set
    let e = HaarSubset::full_levels(&set_levels);
    let max_dil = atom.max_dilation();
    println!("max_dilation = {max_dil}");
    for n in 3u32..=8 {
        let usable: Vec<u32> = (0..=9u32).filter(|k| k + n <= max_dil).collect();
        let single = vec![usable[0]];
        for (tag, sites) in [("multi", usable.clone()), ("single", single)] {
            let mut alphas = vec![1.0f64; n as usize + 1];
            alphas[0] = 0.0;
            let signs = tower_signs(&sites, 1);
            let spec =
                TowerSpec::with_depth(sites.clone(), -0.7, 2.0, alphas, signs.clone()).unwrap();
            let f = tower_function(&spec, &atom, grid).unwrap();
            let (denom, np, nm, v) = value(&f, &e, &signs, &bank, &params);
            println!(
                "N={n} {tag}({} sites) full-ladder: denom={denom:.5} P+={np:.5} P-={nm:.5} value={v:.6}",
                sites.len()
            );
            if tag == "single" {
                for rung in [n - 1, n] {
                    let c = tower_component(&spec, &atom, grid, rung).unwrap();
                    let (denom, _, _, v) = value(&c, &e, &signs, &bank, &params);
                    println!("    component rung={rung}: denom={denom:.5} value={v:.6}");
                }
            }
        }
    }
}
