//! Property tests for the filter bank: linearity of the convolutions and
//! the norm axioms of the surrogate functional under randomized inputs.

use std::sync::OnceLock;

use proptest::prelude::*;

use hpl_core::{DyadicGrid, SampledFunction};
use hpl_filters::{build_filter_bank, FilterBank, TLParams};

fn bank() -> &'static FilterBank {
    static BANK: OnceLock<FilterBank> = OnceLock::new();
    BANK.get_or_init(|| {
        build_filter_bank(DyadicGrid::new(9, 0, 1).unwrap(), 5, 0.5).unwrap()
    })
}

fn arb_field() -> impl Strategy<Value = SampledFunction> {
    let g = bank().grid();
    proptest::collection::vec(-1.0f64..1.0, g.n_points())
        .prop_map(move |v| SampledFunction::from_values(g, v).unwrap())
}

fn arb_params() -> impl Strategy<Value = TLParams> {
    (1.2f64..4.0, 1.2f64..4.0, -1.5f64..1.5, 1u32..=4)
        .prop_map(|(p, q, s, k_max)| TLParams::new(p, q, s, k_max).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Band convolution is linear to rounding.
    #[test]
    fn convolution_is_linear(
        f in arb_field(),
        g in arb_field(),
        a in -4.0f64..4.0,
        b in -4.0f64..4.0,
        k in 0i32..=4,
    ) {
        let bank = bank();
        let mut combo = SampledFunction::zeros(bank.grid());
        combo.axpy(a, &f).unwrap();
        combo.axpy(b, &g).unwrap();
        let lhs = bank.convolve_band(&combo, k).unwrap();
        let mut rhs = bank.convolve_band(&f, k).unwrap();
        rhs.scale(a);
        rhs.axpy(b, &bank.convolve_band(&g, k).unwrap()).unwrap();
        let scale = lhs.linf_norm().max(1.0);
        let diff = SampledFunction::difference(&lhs, &rhs).unwrap().linf_norm();
        prop_assert!(diff <= 1e-12 * scale, "linearity broke: {diff:.3e}");
    }

    /// The norm is absolutely homogeneous.
    #[test]
    fn norm_is_homogeneous(
        f in arb_field(),
        params in arb_params(),
        c in prop_oneof![-8.0f64..-0.125, 0.125f64..8.0],
    ) {
        let bank = bank();
        let base = bank.f_norm(&f, &params).unwrap().value;
        let mut scaled = f.clone();
        scaled.scale(c);
        let got = bank.f_norm(&scaled, &params).unwrap().value;
        let want = c.abs() * base;
        prop_assert!(
            (got - want).abs() <= 1e-12 * want.max(1e-300),
            "homogeneity broke: {got} vs {want}"
        );
    }

    /// The norm satisfies the triangle inequality.
    #[test]
    fn norm_satisfies_triangle_inequality(
        f in arb_field(),
        g in arb_field(),
        params in arb_params(),
    ) {
        let bank = bank();
        let mut sum = f.clone();
        sum.axpy(1.0, &g).unwrap();
        let both = bank.f_norm(&sum, &params).unwrap().value;
        let split =
            bank.f_norm(&f, &params).unwrap().value + bank.f_norm(&g, &params).unwrap().value;
        prop_assert!(
            both <= split * (1.0 + 1e-12),
            "triangle inequality broke: {both} > {split}"
        );
    }

    /// Per-scale pieces recombine into the reported value, and the zero
    /// function has norm zero.
    #[test]
    fn norm_breakdown_is_consistent(f in arb_field(), params in arb_params()) {
        let bank = bank();
        let breakdown = bank.f_norm(&f, &params).unwrap();
        prop_assert_eq!(breakdown.per_scale.len(), params.k_max as usize + 1);
        prop_assert!(breakdown.value.is_finite() && breakdown.value >= 0.0);
        for (k, piece) in breakdown.per_scale.iter().enumerate() {
            prop_assert!(piece.is_finite() && *piece >= 0.0, "piece {k} = {piece}");
        }
        let zero = SampledFunction::zeros(bank.grid());
        prop_assert_eq!(bank.f_norm(&zero, &params).unwrap().value, 0.0);
    }
}
