//! Parameter-regime classification and the predicted growth exponent.
//!
//! The `(p, q, s)` plane splits into five regions for the projection-norm
//! growth in the frequency-set cardinality `Lambda = 2^N`:
//!
//! * `Unconditional` — `max{-1/p', -1/q'} < s < min{1/p, 1/q}`: projection
//!   norms stay bounded, exponent 0.
//! * `PositiveBand` — `1/q < s < 1/p` (forces `p < q`... see below):
//!   polynomial growth `Lambda^{s - 1/q}`.
//! * `NegativeBand` — `-1/p' < s < -1/q'` (forces `q < p`): polynomial
//!   growth `Lambda^{-1/q' - s}`.
//! * `Endpoint` — `s = 1/q` or `s = -1/q'` strictly inside the finite
//!   range: logarithmic growth whose rate depends on the frequency-set
//!   density, not on the cardinality alone.
//! * `Infinite` — `s >= 1/p` or `s <= -1/p'`: the Haar system leaves the
//!   space entirely.
//!
//! The band conditions quietly force the exponent ordering: `1/q < s < 1/p`
//! is nonempty only when `1/q < 1/p`, i.e. `p < q`, and symmetrically for
//! the negative band, so no explicit `p` vs `q` comparison is needed — the
//! `Infinite` cutoffs do the work.

use crate::error::ExperimentError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Unconditional,
    PositiveBand,
    NegativeBand,
    Endpoint,
    Infinite,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Unconditional => "unconditional",
            Regime::PositiveBand => "positive_band",
            Regime::NegativeBand => "negative_band",
            Regime::Endpoint => "endpoint",
            Regime::Infinite => "infinite",
        }
    }
}

fn check_exponents(p: f64, q: f64, s: f64) -> Result<(), ExperimentError> {
    for (key, v) in [("p", p), ("q", q)] {
        if !v.is_finite() || v <= 1.0 {
            return Err(ExperimentError::ConfigInvalid {
                key,
                detail: format!("{v} is not in (1, inf)"),
            });
        }
    }
    if !s.is_finite() {
        return Err(ExperimentError::ConfigInvalid {
            key: "s",
            detail: format!("{s} is not finite"),
        });
    }
    Ok(())
}

/// Classify `(p, q, s)`. Endpoint detection is exact float equality with
/// `1/q` and `1/q - 1`; callers wanting the endpoint regime must pass the
/// same expression (e.g. `-0.5` for `q = 2`).
pub fn classify_regime(p: f64, q: f64, s: f64) -> Result<Regime, ExperimentError> {
    check_exponents(p, q, s)?;
    let p_end = 1.0 / p; // upper cutoff; lower is -(1 - 1/p)
    let q_edge = 1.0 / q;
    if s >= p_end || s <= p_end - 1.0 {
        return Ok(Regime::Infinite);
    }
    if s == q_edge || s == q_edge - 1.0 {
        return Ok(Regime::Endpoint);
    }
    if s > q_edge {
        return Ok(Regime::PositiveBand);
    }
    if s < q_edge - 1.0 {
        return Ok(Regime::NegativeBand);
    }
    Ok(Regime::Unconditional)
}

/// Predicted log2-growth exponent of the projection norm in `Lambda`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PredictedExponent {
    /// Growth `Lambda^e`; the unconditional region reports `e = 0`.
    Polynomial(f64),
    /// Logarithmic regime at the endpoint smoothness: the rate depends on
    /// the density of the frequency set, between `(log Lambda)^{1/q}` (or
    /// `^{1 - 1/q}` on the negative edge) and `log Lambda`.
    LogRegime,
    /// The Haar system is outside the space; no finite rate.
    Infinite,
}

impl PredictedExponent {
    pub fn value(&self) -> Option<f64> {
        match self {
            PredictedExponent::Polynomial(e) => Some(*e),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            PredictedExponent::Polynomial(e) => format!("{e}"),
            PredictedExponent::LogRegime => "log_regime".into(),
            PredictedExponent::Infinite => "infinite".into(),
        }
    }
}

pub fn predicted_exponent(p: f64, q: f64, s: f64) -> Result<PredictedExponent, ExperimentError> {
    Ok(match classify_regime(p, q, s)? {
        Regime::Unconditional => PredictedExponent::Polynomial(0.0),
        Regime::PositiveBand => PredictedExponent::Polynomial(s - 1.0 / q),
        Regime::NegativeBand => PredictedExponent::Polynomial(-(1.0 - 1.0 / q) - s),
        Regime::Endpoint => PredictedExponent::LogRegime,
        Regime::Infinite => PredictedExponent::Infinite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_three_reference_points() {
        assert_eq!(
            predicted_exponent(6.0, 2.0, -0.7).unwrap(),
            PredictedExponent::Polynomial(-(1.0 - 0.5) - -0.7)
        );
        let e = predicted_exponent(6.0, 2.0, -0.7).unwrap().value().unwrap();
        assert!((e - 0.2).abs() < 1e-12);
        let e = predicted_exponent(2.0, 4.0, 0.3).unwrap().value().unwrap();
        assert!((e - 0.05).abs() < 1e-12);
        assert_eq!(
            predicted_exponent(3.0, 2.0, 0.0).unwrap(),
            PredictedExponent::Polynomial(0.0)
        );
    }

    #[test]
    fn edges_and_outside() {
        assert_eq!(classify_regime(6.0, 2.0, -0.5).unwrap(), Regime::Endpoint);
        assert_eq!(classify_regime(2.0, 4.0, 0.25).unwrap(), Regime::Endpoint);
        assert_eq!(classify_regime(2.0, 2.0, 0.5).unwrap(), Regime::Infinite);
        assert_eq!(classify_regime(2.0, 2.0, -0.5).unwrap(), Regime::Infinite);
        // On the crowded side the q-edge sits beyond the p-cutoff and the
        // infinite region wins.
        assert_eq!(classify_regime(2.0, 3.0, 0.6).unwrap(), Regime::Infinite);
        assert!(classify_regime(1.0, 2.0, 0.0).is_err());
        assert!(classify_regime(2.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn exponent_vanishes_continuously_at_the_band_edge() {
        // Approach s -> (-1/q')^- from inside the negative band.
        let q: f64 = 2.0;
        for &eps in &[1e-2, 1e-4, 1e-8] {
            let s = -(1.0 - 1.0 / q) - eps;
            let e = predicted_exponent(6.0, q, s).unwrap().value().unwrap();
            assert!((e - eps).abs() < 1e-12);
        }
    }
}
