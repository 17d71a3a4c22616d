//! Experiment configuration: exponents, frequency-set builder, candidate
//! families, sampling budget, and grid/bank parameters, with a flat
//! `key = value` text form that round-trips bit-exactly (reports embed it,
//! and re-running from the embedded text reproduces the report).

use std::fmt::Write as _;

use crate::error::ExperimentError;
use crate::regime::{classify_regime, Regime};

/// Candidate generators available to the norm estimator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateFamily {
    /// Layered midpoint-atom functions with per-level signs.
    Tower,
    /// Colliding-scale atom trains on an interval frequency block.
    Interval,
    /// Random separated atom placements.
    AtomSum,
    /// Haar polynomials supported on the target index set.
    Bandlimited,
}

impl CandidateFamily {
    pub fn label(&self) -> &'static str {
        match self {
            CandidateFamily::Tower => "tower",
            CandidateFamily::Interval => "interval",
            CandidateFamily::AtomSum => "atom_sum",
            CandidateFamily::Bandlimited => "bandlimited",
        }
    }

    fn parse(s: &str) -> Result<Self, ExperimentError> {
        match s {
            "tower" => Ok(CandidateFamily::Tower),
            "interval" => Ok(CandidateFamily::Interval),
            "atom_sum" => Ok(CandidateFamily::AtomSum),
            "bandlimited" => Ok(CandidateFamily::Bandlimited),
            other => Err(ExperimentError::ConfigInvalid {
                key: "families",
                detail: format!("unknown family {other:?}"),
            }),
        }
    }
}

/// How the frequency set `A` for row `N` is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetBuilder {
    /// `A = {0, 1, ..., L-1}` with `L = min(2^N, resolution budget)`.
    FullRange,
    /// `A = {0, N, 2N, ...}` as far as the resolution budget allows.
    Separated,
    /// An explicit level list, identical for every row.
    Custom(Vec<u32>),
}

impl SetBuilder {
    fn label(&self) -> String {
        match self {
            SetBuilder::FullRange => "full_range".into(),
            SetBuilder::Separated => "separated".into(),
            SetBuilder::Custom(levels) => {
                let list: Vec<String> = levels.iter().map(|l| l.to_string()).collect();
                format!("custom:{}", list.join(","))
            }
        }
    }

    fn parse(s: &str) -> Result<Self, ExperimentError> {
        if s == "full_range" {
            return Ok(SetBuilder::FullRange);
        }
        if s == "separated" {
            return Ok(SetBuilder::Separated);
        }
        if let Some(list) = s.strip_prefix("custom:") {
            let levels = list
                .split(',')
                .map(|t| {
                    t.trim().parse::<u32>().map_err(|_| {
                        ExperimentError::ConfigInvalid {
                            key: "set",
                            detail: format!("bad level {t:?}"),
                        }
                    })
                })
                .collect::<Result<Vec<u32>, _>>()?;
            if levels.is_empty() {
                return Err(ExperimentError::ConfigInvalid {
                    key: "set",
                    detail: "custom set is empty".into(),
                });
            }
            return Ok(SetBuilder::Custom(levels));
        }
        Err(ExperimentError::ConfigInvalid {
            key: "set",
            detail: format!("unknown builder {s:?}"),
        })
    }
}

/// Fully resolved experiment parameters. Exponents are fixed at
/// construction (the regime classification must succeed); everything else
/// is plain data.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    p: f64,
    q: f64,
    s: f64,
    regime: Regime,
    pub n_lo: u32,
    pub n_hi: u32,
    pub set_builder: SetBuilder,
    pub families: Vec<CandidateFamily>,
    pub samples: u32,
    pub seed: u64,
    /// Fixed grid resolution; `None` lets each experiment pick per row.
    pub j_max: Option<u32>,
    pub m1: usize,
    pub support_radius: f64,
    pub k_max: u32,
    pub slope_tol: f64,
    /// Ladder depth for the layered candidates; `None` uses the full
    /// dilation budget of the row's atom.
    pub ladder_depth: Option<u32>,
}

impl ExperimentConfig {
    pub fn new(p: f64, q: f64, s: f64) -> Result<Self, ExperimentError> {
        let regime = classify_regime(p, q, s)?;
        Ok(Self {
            p,
            q,
            s,
            regime,
            n_lo: 3,
            n_hi: 8,
            set_builder: SetBuilder::FullRange,
            families: vec![
                CandidateFamily::Tower,
                CandidateFamily::AtomSum,
                CandidateFamily::Bandlimited,
            ],
            samples: 32,
            seed: 7,
            j_max: None,
            m1: 5,
            support_radius: 0.5,
            k_max: 8,
            slope_tol: 0.1,
            ladder_depth: None,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Check the mutable fields; the constructors validate the exponents.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.n_lo > self.n_hi {
            return Err(ExperimentError::ConfigInvalid {
                key: "n_lo",
                detail: format!("n_lo = {} exceeds n_hi = {}", self.n_lo, self.n_hi),
            });
        }
        if self.samples == 0 {
            return Err(ExperimentError::ConfigInvalid {
                key: "samples",
                detail: "need at least one draw".into(),
            });
        }
        if self.families.is_empty() {
            return Err(ExperimentError::ConfigInvalid {
                key: "families",
                detail: "no candidate family enabled".into(),
            });
        }
        if self.slope_tol <= 0.0 || !self.slope_tol.is_finite() {
            return Err(ExperimentError::ConfigInvalid {
                key: "slope_tol",
                detail: format!("{} is not positive", self.slope_tol),
            });
        }
        if self.k_max == 0 {
            return Err(ExperimentError::ConfigInvalid {
                key: "k_max",
                detail: "need at least one band scale".into(),
            });
        }
        Ok(())
    }

    /// Flat text form, one `key = value` per line, keys in fixed order.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p = {}", self.p);
        let _ = writeln!(out, "q = {}", self.q);
        let _ = writeln!(out, "s = {}", self.s);
        let _ = writeln!(out, "n_lo = {}", self.n_lo);
        let _ = writeln!(out, "n_hi = {}", self.n_hi);
        let _ = writeln!(out, "set = {}", self.set_builder.label());
        let families: Vec<&str> = self.families.iter().map(|f| f.label()).collect();
        let _ = writeln!(out, "families = {}", families.join(","));
        let _ = writeln!(out, "samples = {}", self.samples);
        let _ = writeln!(out, "seed = {}", self.seed);
        match self.j_max {
            Some(j) => {
                let _ = writeln!(out, "j_max = {j}");
            }
            None => {
                let _ = writeln!(out, "j_max = auto");
            }
        }
        let _ = writeln!(out, "m1 = {}", self.m1);
        let _ = writeln!(out, "support_radius = {}", self.support_radius);
        let _ = writeln!(out, "k_max = {}", self.k_max);
        let _ = writeln!(out, "slope_tol = {}", self.slope_tol);
        match self.ladder_depth {
            Some(d) => {
                let _ = writeln!(out, "ladder_depth = {d}");
            }
            None => {
                let _ = writeln!(out, "ladder_depth = auto");
            }
        }
        out
    }

    /// Parse the `to_kv` form (or a hand-written config file). Unknown keys
    /// are rejected by name; missing keys fall back to defaults except the
    /// three exponents, which are required.
    pub fn from_kv(text: &str) -> Result<Self, ExperimentError> {
        let pairs = parse_kv_lines(text)?;
        let mut p = None;
        let mut q = None;
        let mut s = None;
        // Exponents first: the constructor needs them.
        for (key, value) in &pairs {
            match key.as_str() {
                "p" => p = Some(parse_f64("p", value)?),
                "q" => q = Some(parse_f64("q", value)?),
                "s" => s = Some(parse_f64("s", value)?),
                _ => {}
            }
        }
        let need = |v: Option<f64>, key: &'static str| {
            v.ok_or(ExperimentError::ConfigInvalid {
                key,
                detail: "missing".into(),
            })
        };
        let mut cfg = Self::new(need(p, "p")?, need(q, "q")?, need(s, "s")?)?;
        for (key, value) in &pairs {
            match key.as_str() {
                "p" | "q" | "s" => {}
                "n_lo" => cfg.n_lo = parse_int("n_lo", value)?,
                "n_hi" => cfg.n_hi = parse_int("n_hi", value)?,
                "set" => cfg.set_builder = SetBuilder::parse(value)?,
                "families" => {
                    cfg.families = value
                        .split(',')
                        .map(|t| CandidateFamily::parse(t.trim()))
                        .collect::<Result<Vec<_>, _>>()?;
                }
                "samples" => cfg.samples = parse_int("samples", value)?,
                "seed" => {
                    cfg.seed = value.parse().map_err(|_| ExperimentError::ConfigInvalid {
                        key: "seed",
                        detail: format!("bad integer {value:?}"),
                    })?;
                }
                "j_max" => {
                    cfg.j_max = if value == "auto" {
                        None
                    } else {
                        Some(parse_int("j_max", value)?)
                    };
                }
                "m1" => {
                    cfg.m1 = value.parse().map_err(|_| ExperimentError::ConfigInvalid {
                        key: "m1",
                        detail: format!("bad integer {value:?}"),
                    })?;
                }
                "support_radius" => cfg.support_radius = parse_f64("support_radius", value)?,
                "k_max" => cfg.k_max = parse_int("k_max", value)?,
                "slope_tol" => cfg.slope_tol = parse_f64("slope_tol", value)?,
                "ladder_depth" => {
                    cfg.ladder_depth = if value == "auto" {
                        None
                    } else {
                        Some(parse_int("ladder_depth", value)?)
                    };
                }
                other => {
                    return Err(ExperimentError::ConfigMalformed {
                        line: 0,
                        detail: format!("unknown key {other:?}"),
                    });
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Apply a `key=value` override (the CLI's `--set`).
    pub fn apply_override(&mut self, expr: &str) -> Result<(), ExperimentError> {
        let (key, value) = expr
            .split_once('=')
            .ok_or_else(|| ExperimentError::ConfigMalformed {
                line: 0,
                detail: format!("override {expr:?} is not key=value"),
            })?;
        // Exponent overrides re-classify through the constructor, so
        // rebuild from the serialized state with the override substituted.
        let mut last = std::collections::BTreeMap::new();
        for (k, v) in parse_kv_lines(&self.to_kv())? {
            last.insert(k, v);
        }
        last.insert(key.trim().to_string(), value.trim().to_string());
        let text: String = last
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect();
        *self = Self::from_kv(&text)?;
        Ok(())
    }
}

fn parse_f64(key: &'static str, value: &str) -> Result<f64, ExperimentError> {
    value.parse().map_err(|_| ExperimentError::ConfigInvalid {
        key,
        detail: format!("bad number {value:?}"),
    })
}

fn parse_int(key: &'static str, value: &str) -> Result<u32, ExperimentError> {
    value.parse().map_err(|_| ExperimentError::ConfigInvalid {
        key,
        detail: format!("bad integer {value:?}"),
    })
}

/// Split flat config text into ordered `(key, value)` pairs. `#` starts a
/// comment line; blank lines are skipped; later duplicates are rejected
/// (overrides go through [`ExperimentConfig::apply_override`]).
fn parse_kv_lines(text: &str) -> Result<Vec<(String, String)>, ExperimentError> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) =
            line.split_once('=')
                .ok_or_else(|| ExperimentError::ConfigMalformed {
                    line: i + 1,
                    detail: format!("expected key = value, got {line:?}"),
                })?;
        let key = key.trim().to_string();
        if !seen.insert(key.clone()) {
            return Err(ExperimentError::ConfigMalformed {
                line: i + 1,
                detail: format!("duplicate key {key:?}"),
            });
        }
        out.push((key, value.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_roundtrip_is_exact() {
        let mut cfg = ExperimentConfig::new(6.0, 2.0, -0.7).unwrap();
        cfg.set_builder = SetBuilder::Custom(vec![0, 3, 9]);
        cfg.families = vec![CandidateFamily::Interval, CandidateFamily::Bandlimited];
        cfg.j_max = Some(13);
        cfg.ladder_depth = Some(4);
        let text = cfg.to_kv();
        let back = ExperimentConfig::from_kv(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_kv(), text);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_named() {
        let err = ExperimentConfig::from_kv("p = 2\nq = 2\ns = 0\nwat = 1\n").unwrap_err();
        assert!(err.to_string().contains("wat"));
        let err = ExperimentConfig::from_kv("p = x\nq = 2\ns = 0\n").unwrap_err();
        assert!(err.to_string().contains('p'));
        let err = ExperimentConfig::from_kv("q = 2\ns = 0\n").unwrap_err();
        assert!(err.to_string().contains('p'));
    }

    #[test]
    fn overrides_replace_fields() {
        let mut cfg = ExperimentConfig::new(6.0, 2.0, -0.7).unwrap();
        cfg.apply_override("samples=4").unwrap();
        assert_eq!(cfg.samples, 4);
        cfg.apply_override("s = -0.5").unwrap();
        assert_eq!(cfg.s(), -0.5);
        assert_eq!(cfg.regime(), crate::regime::Regime::Endpoint);
        assert!(cfg.apply_override("nope=1").is_err());
    }
}
