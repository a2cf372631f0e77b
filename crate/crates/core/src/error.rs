use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("inconsistent codimension: {0}")]
    BadCodimension(String),

    #[error("cannot blow up the unit ideal")]
    UnitCenter,

    #[error("chart simplification failed: {0}")]
    ChartSimplification(String),

    #[error("center strategy failed: {0}")]
    StrategyFailure(String),

    #[error("resolution limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("non-square substitution map: {source_vars} chart variables vs {target_vars} target variables")]
    NonSquareMap {
        source_vars: usize,
        target_vars: usize,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("divisor identification failed: {0}")]
    Identification(String),

    #[error("inconsistent invariant values across charts: {0}")]
    Inconsistent(String),

    #[error("{0}")]
    Invalid(String),
}
