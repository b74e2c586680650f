use thiserror::Error;

/// Errors produced by kernel evaluation, sequence construction and
/// discrepancy computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("kernel evaluated at degenerate distance {t:e} (coincident points)")]
    DegenerateDistance { t: f64 },

    #[error("no admissible region left for exclusion radius {radius:e} with {points} points")]
    NoAdmissibleRegion { radius: f64, points: usize },

    #[error("point set is empty")]
    EmptySet,

    #[error("dimension {0} is not supported by this operation")]
    UnsupportedDimension(usize),

    #[error("need at least {needed} points, have {available}")]
    InsufficientPoints { needed: usize, available: usize },

    #[error("cost guard: {terms} frequency vectors exceeds limit {limit}")]
    CostGuard { terms: u128, limit: u128 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
