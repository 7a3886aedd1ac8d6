use thiserror::Error;

/// Errors produced by the estimation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("row {row}, column {column}: non-finite value {value}")]
    NonFinite {
        row: usize,
        column: usize,
        value: f64,
    },

    #[error("input contains no data rows")]
    EmptyData,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("value outside the domain of {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// No strictly positive weight vector can centre the scores: every
    /// nonzero angular score lies on the same side of pi/4.
    #[error(
        "moment constraint infeasible: angular sample is one-sided \
         ({negative} scores below pi/4, {zero} at pi/4, {positive} above)"
    )]
    ConstraintInfeasible {
        negative: usize,
        zero: usize,
        positive: usize,
    },

    #[error("multiplier search stalled with residual {residual:e} after {iterations} iterations")]
    NotConverged { residual: f64, iterations: usize },

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
