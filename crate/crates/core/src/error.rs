use thiserror::Error;

/// Errors produced by graph construction, samplers, designs and the test engines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    OutOfRangeVertex { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("vertex mapping is not a bijection")]
    NotABijection,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("cannot place {m} distinct edges on {n} vertices")]
    TooManyEdges { n: usize, m: usize },

    #[error("at least two vertices are required")]
    TooFewVertices,

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("invalid count: {0}")]
    InvalidCount(String),

    #[error("input is empty")]
    EmptyInput,

    #[error("degree term requested on a graph without edges")]
    DegenerateGraph,

    #[error("null class enumeration supports at most {limit} vertices, got {n}")]
    TooLargeForEnumeration { n: usize, limit: usize },

    #[error("test statistic is undefined on the observed data")]
    ObservedStatisticUndefined,

    #[error("{undefined} of {total} null draws have an undefined statistic (limit 10%)")]
    ExcessiveDegeneracy { undefined: usize, total: usize },

    #[error("a treatment assignment is required for {0}")]
    MissingAssignment(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
