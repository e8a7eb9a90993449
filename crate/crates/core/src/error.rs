use thiserror::Error;

/// Errors raised by the structures, search engines and density estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("kind mismatch: {0}")]
    KindMismatch(String),

    #[error("structure {0} has no additive group operation")]
    NotAdditive(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("subgroup is trivial ({{0}}); cosets and index are undefined")]
    TrivialSubgroup,

    #[error("membership query for {element} is outside the declared support of {set}")]
    SupportExceeded { set: String, element: String },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("length guard: sequence length {len} exceeds maximum {max}")]
    LengthGuard { len: usize, max: usize },

    #[error("guard exceeded for {what}: {detail}; estimated cost {cost_estimate:.3e} operations")]
    GuardExceeded {
        what: String,
        detail: String,
        cost_estimate: f64,
    },

    #[error("subgroup has infinite index; a finite-index subgroup is required")]
    InfiniteIndex,

    #[error("subgroup has finite index {0}; an infinite-index subgroup is required")]
    FiniteIndex(u64),

    #[error("sequence length {got} is too short; at least {need} terms are required")]
    SequenceTooShort { got: usize, need: usize },

    #[error("search exhausted after {candidates} candidates at position {position}")]
    SearchExhausted { position: usize, candidates: usize },

    #[error("operation requires a totally ordered structure (integers)")]
    NotOrdered,

    #[error("finite sums of b contain 0 ({0})")]
    ZeroInFiniteSums(String),

    #[error("no index set H found for x = {x}: no subset sum of x*b lies in B")]
    NoIndexSetFound { x: String },

    #[error("window index {n} is outside the generated range {min}..={max}")]
    WindowOutOfRange { n: usize, min: usize, max: usize },

    #[error("search grid exhausted: {a_count} shifts x {subsets} index sets, no witness")]
    GridExhausted { a_count: usize, subsets: usize },

    #[error("internal recheck failed: {0}")]
    RecheckFailed(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
