use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("substitution produces a zero denominator")]
    ZeroDenominator,

    #[error("points coincide: {0}")]
    CoincidentPoints(String),

    #[error("configuration is degenerate for this chart: {0}")]
    Degenerate(String),

    #[error("diagonal ({0}, {1}) is not in the triangulation")]
    NotInTriangulation(usize, usize),

    #[error("exchange graph was truncated at {0} nodes")]
    Truncated(usize),

    #[error("no path between charts {0} and {1}")]
    NoPath(usize, usize),

    #[error("half-integral coordinate on edge {0}: vertex-sum condition violated")]
    HalfIntegral(usize),

    #[error("crossing diagonals ({0}, {1}) and ({2}, {3})")]
    Crossing(usize, usize, usize, usize),

    #[error("mismatched constraint lists in bounded Minkowski sum")]
    ConstraintMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
