use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{pos:?} is not within {slack} of {low:?} and {high:?}")]
    OutOfBounds {
        pos: Vec<f64>,
        low: Vec<f64>,
        high: Vec<f64>,
        slack: f64,
    },

    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no feasible neighbor after {attempts} resamples")]
    NeighborhoodExhausted { attempts: usize },

    #[error("chain started where the target density is zero: {pos:?}")]
    DegenerateStart { pos: Vec<f64> },

    #[error("within-chain variance is zero")]
    DegenerateChains,

    #[error("sequence too short: need at least {min}, got {len}")]
    TooShort { len: usize, min: usize },

    #[error("empty state list")]
    EmptyStates,

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
}
