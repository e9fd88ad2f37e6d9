use thiserror::Error;

/// Errors raised by the library.
///
/// Positions are reported as `f64` parameter values so the enum does not
/// depend on the scalar type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid nodes are not strictly increasing at index {index}")]
    NonMonotoneGrid { index: usize },

    #[error("grid needs at least 2 nodes, got {len}")]
    GridTooShort { len: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("sample {index} has {actual} components, expected {expected}")]
    RaggedComponents {
        index: usize,
        expected: usize,
        actual: usize,
    },

    #[error("difference order {order} needs more than {len} nodes")]
    OrderTooHigh { order: usize, len: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("not a finite orthogonal group: {0}")]
    NotAGroup(String),

    #[error("refinement budget exhausted near t = {t} after depth {depth}")]
    RefinementBudgetExhausted { t: f64, depth: usize },

    #[error("polynomial root solver failed at t = {t} (residual {residual:e})")]
    RootSolveFailure { t: f64, residual: f64 },

    #[error("lift does not vanish at the zero-set boundary t = {t} (|value| = {value:e})")]
    DiscontinuousAtZeroSet { t: f64, value: f64 },

    #[error("no group element reconciles the junction (best mismatch {mismatch:e})")]
    NoReconcilingElement { mismatch: f64 },

    #[error("exponent p = {p} is not below the critical exponent {critical}")]
    ExponentOutOfRange { p: f64, critical: f64 },

    #[error("all radicals vanish at node {index}")]
    AllZeroAtPoint { index: usize },

    #[error("dominant radical vanishes at t = {t}")]
    VanishingDominant { t: f64 },

    #[error("dominant component vanishes at t1 = {t}")]
    DominantVanishes { t: f64 },

    #[error("root clusters not separated at t = {t}")]
    ClustersNotSeparated { t: f64 },

    #[error("no grid cell next to t = {t} satisfies the admissibility constraint; refine the grid")]
    IntervalUnresolved { t: f64 },

    #[error("point s = {s} is outside the admissible range")]
    OutOfRange { s: f64 },

    #[error("cover property violated ({property}) at t = {t}")]
    CoverPropertyViolation { property: String, t: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
