use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GsbError {
    #[error("label {label} does not belong to group {group}")]
    LabelMismatch { label: String, group: String },

    #[error("point does not belong to the complexified group: {0}")]
    InvalidPoint(String),

    #[error("|Y| = {norm} exceeds the overflow guard {guard}")]
    OverflowGuard { norm: f64, guard: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A truncated series could not meet its tolerance before the hard cutoff.
    #[error("series tail bound {tail_bound:e} above tolerance {tolerance:e} at cutoff {cutoff}")]
    TailBound {
        cutoff: usize,
        tail_bound: f64,
        tolerance: f64,
    },

    #[error("finite-difference step too large: error estimate {estimate:e} above tolerance {tolerance:e}")]
    StepTooLarge { estimate: f64, tolerance: f64 },

    #[error("quadrature levels disagree: gap {gap:e} above tolerance {tolerance:e} (level values {levels:?})")]
    QuadratureGap {
        gap: f64,
        tolerance: f64,
        levels: Vec<f64>,
    },

    #[error("truncated integral did not stabilize in R: last increments {increments:?}")]
    NotStabilized { increments: Vec<f64> },
}

pub type Result<T> = std::result::Result<T, GsbError>;
