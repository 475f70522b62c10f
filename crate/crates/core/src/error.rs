use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insensitive working point: signal slope vanishes")]
    InsensitiveWorkingPoint,

    #[error("diverging result: {0}")]
    Diverging(String),

    #[error("series did not converge: tail bound {tail_bound:e} above tolerance {tolerance:e}")]
    SeriesNonConvergence { tail_bound: f64, tolerance: f64 },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("Fock truncation leak: population {leaked:e} in top levels exceeds bound {bound:e}")]
    TruncationLeak { leaked: f64, bound: f64 },

    #[error("memory cap exceeded: need {needed} bytes, cap is {cap} bytes")]
    MemoryCap { needed: u64, cap: u64 },

    #[error("grid too coarse: step {step} exceeds {limit}")]
    GridTooCoarse { step: f64, limit: f64 },

    #[error("step size collapsed to {0:e}")]
    StepCollapse(f64),

    #[error("positivity breach: minimum eigenvalue {0:e}")]
    Positivity(f64),

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
