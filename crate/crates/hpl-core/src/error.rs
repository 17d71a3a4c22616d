use thiserror::Error;

/// Errors from grid construction, Haar algebra, and norm evaluation.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("window [{x_lo}, {x_hi}] is empty; need x_lo < x_hi")]
    EmptyWindow { x_lo: i64, x_hi: i64 },

    #[error(
        "grid would have {points} points, above the size limit of {max} \
         (shrink the window or lower the resolution)"
    )]
    GridTooLarge { points: u128, max: u64 },

    #[error("resolution exponent {j_max} out of range [{min}, {max}]", min = crate::grid::MIN_J_MAX, max = crate::grid::MAX_J_MAX)]
    JMaxOutOfRange { j_max: u32 },

    #[error("window endpoints [{x_lo}, {x_hi}] exceed the coordinate cap {max}", max = crate::grid::MAX_WINDOW_ABS)]
    WindowOutOfRange { x_lo: i64, x_hi: i64 },

    #[error("Haar level {j} not representable on a grid with resolution exponent {j_max} (need -1 <= j <= j_max - 1)")]
    LevelOutOfRange { j: i32, j_max: u32 },

    #[error("Haar support for (j={j}, mu={mu}) leaves the grid window")]
    SupportOutOfWindow { j: i32, mu: i64 },

    #[error("Haar level must be >= -1, got {j}")]
    LevelBelowRoot { j: i32 },

    #[error("operands live on different grids")]
    GridMismatch,

    #[error("exponent `{name}` must be a finite value >= 1, got {value}")]
    InvalidExponent { name: &'static str, value: f64 },

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("value length {got} does not match grid point count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("set must be non-empty")]
    EmptySet,

    #[error("moment correction is ill-conditioned (pivot ratio {pivot_ratio:.3e}); too many orders for this resolution")]
    IllConditionedMoments { pivot_ratio: f64 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
