use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// Node numbers carried by the variants are the 1-based numbers used at the
/// public surface.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),

    #[error("self loop on node {0}")]
    SelfLoop(usize),

    #[error("invalid rate {value} for {what}: rates must be finite and non-negative, edge rates positive")]
    NegativeRate { what: String, value: f64 },

    #[error("node {index} out of range 1..={size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("budget exceeded: {what} needs {needed}, cap is {cap}")]
    BudgetExceeded {
        what: String,
        needed: usize,
        cap: usize,
    },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("node {0} has outgoing edges; reduce them before splitting")]
    OutEdgesPresent(usize),

    #[error("no edge {0} -> {1}")]
    NoSuchEdge(usize, usize),

    #[error("bad node set: {0}")]
    BadOmega(String),

    #[error("size mismatch: {0} vs {1} nodes")]
    SizeMismatch(usize, usize),

    #[error("first network is not dominated by the second")]
    NotDominated,

    #[error("solver tolerance not met: achieved {achieved:e}, required {required:e}")]
    ToleranceNotMet { achieved: f64, required: f64 },

    #[error("near-singular circle parameters q = {q}, p = {p} (q is close to {multiple} p)")]
    SingularParameters { p: f64, q: f64, multiple: usize },

    #[error("time step too large: dt * max rate = {0} >= 1")]
    StepTooLarge(f64),

    #[error("sampled function {0} is not monotone")]
    NotMonotone(String),

    #[error("bad weight: {0}")]
    BadWeight(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed network file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
