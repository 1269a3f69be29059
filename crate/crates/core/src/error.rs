use thiserror::Error;

/// Structural violations detected while constructing a model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model has no states")]
    NoStates,
    #[error("duplicate state name `{0}`")]
    DuplicateState(String),
    #[error("state index {0} is out of range")]
    UnknownState(usize),
    #[error("action index {0} is out of range")]
    UnknownAction(usize),
    #[error("edge {src} -> {dst} has non-positive probability {prob}")]
    NonPositiveProbability { src: String, dst: String, prob: String },
    #[error("probability sum of {context} is {sum}, expected 1")]
    ProbabilitySum { context: String, sum: String },
    #[error("state `{0}` has no outgoing edge")]
    NoOutgoingEdge(String),
    #[error("duplicate edge {src} -> {dst}")]
    DuplicateEdge { src: String, dst: String },
    #[error("state `{0}` has no enabled action")]
    NoActions(String),
    #[error("action `{action}` appears twice at state `{state}`")]
    DuplicateAction { state: String, action: String },
    #[error("path edges do not chain at position {0}")]
    BrokenPath(usize),
    #[error("window length must be at least 1")]
    ZeroWindow,
    #[error("{0} objectives require a window length")]
    MissingWindow(&'static str),
    #[error("{0} objectives take no window length")]
    UnexpectedWindow(&'static str),
}

/// Errors raised by analyses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    Model(#[from] ModelError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{what} has size {size}, above the cap of {cap}")]
    SizeCap { what: String, size: String, cap: u64 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
