use thiserror::Error;

/// Errors produced by graph construction, the solvers and the detectors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("column {0} has zero sample variance")]
    ZeroVarianceColumn(usize),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("labels must contain at least one positive and one negative entry")]
    DegenerateLabels,

    #[error("invalid anomaly count {count} for {rows} rows")]
    InvalidCount { count: usize, rows: usize },

    #[error("invalid signal data: {0}")]
    InvalidSignal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
