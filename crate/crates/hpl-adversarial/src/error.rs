use hpl_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AdversarialError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("atom moment count m0 = {m0} must be even so the profile derivative is odd")]
    AtomParityMismatch { m0: usize },

    #[error("atom support radius {value} must be a power of two at most 2^-5")]
    UnsupportedAtomRadius { value: f64 },

    #[error("atom profile has only {samples} samples per half-support; need at least {min} (raise the grid resolution)")]
    AtomResolutionTooCoarse { samples: usize, min: usize },

    #[error("atom normalization degenerated (half-line sum {sum:.3e})")]
    DegenerateAtom { sum: f64 },

    #[error("dilation 2^{dilation} exceeds the atom's certified range 2^{max} (coarser quadrature would break the coefficient identities)")]
    DilationOverflow { dilation: i64, max: u32 },

    #[error("grid window [{x_lo}, {x_hi}] too small; constructions need the window to strictly contain [0, 1]")]
    WindowTooSmall { x_lo: i64, x_hi: i64 },

    #[error("atom centers at level {level} are only {gap} cells apart; separation requires at least {min} cells")]
    SeparationViolated { level: u32, gap: i64, min: i64 },

    #[error("level {level} appears more than once in the placement list")]
    DuplicateLevel { level: u32 },

    #[error("placement invalid: {detail}")]
    PlacementInvalid { detail: String },

    #[error("coefficient {value} at level {level} exceeds the unit bound")]
    CoefficientOutOfRange { level: u32, value: f64 },

    #[error("level family is too small: {got} levels for family parameter m = {m} (need at least 2^m)")]
    LevelFamilyTooSmall { got: usize, m: u32 },

    #[error("alphas length {got} does not match N + 1 = {want}")]
    AlphaLengthMismatch { got: usize, want: usize },

    #[error("frequency set size {card} incompatible with N = {n}; need 2^N <= size < 2^(N+1)")]
    CardinalityMismatch { card: usize, n: u32 },

    #[error("interval structure invalid: {detail}")]
    IntervalInvalid { detail: String },

    #[error("spec text malformed: {detail}")]
    SpecTextMalformed { detail: String },
}
