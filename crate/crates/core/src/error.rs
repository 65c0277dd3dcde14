use thiserror::Error;

/// Errors produced by the sparsification pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entry {value} at ({row}, {col}) lies outside [-1, 1]")]
    EntryOutOfRange { row: usize, col: usize, value: f64 },

    #[error("hypothesis {hypothesis} outputs {value} on point {point}, outside [-1, 1]")]
    DomainViolation {
        hypothesis: usize,
        point: usize,
        value: f64,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("weight vector is not normalized (l1 norm {0})")]
    NotNormalized(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coloring discrepancy {achieved} exceeds bound {bound} after {attempts} attempts")]
    BoundViolation {
        achieved: f64,
        bound: f64,
        attempts: usize,
    },

    #[error("partial coloring froze {frozen} of the {required} required coordinates in {iterations} steps")]
    PhaseFailure {
        frozen: usize,
        required: usize,
        iterations: usize,
    },

    #[error("exhaustive search refused for {0} columns (limit 20)")]
    TooManyColumns(usize),

    #[error("metric undefined: {0}")]
    UndefinedMetric(&'static str),

    #[error("linear program failed: {0}")]
    Lp(String),
}

pub type Result<T> = std::result::Result<T, Error>;
