use thiserror::Error;

/// Errors raised by the solvers, validators and file readers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge index {edge} out of range for a graph with {m} edges")]
    EdgeOutOfRange { edge: usize, m: usize },

    #[error("({u}, {v}) is not an edge of the graph")]
    NoSuchEdge { u: usize, v: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("parallel edge ({0}, {1})")]
    ParallelEdge(usize, usize),

    #[error("graph has an isolated vertex {0}")]
    IsolatedVertex(usize),

    #[error("instance too large for this oracle: {what} = {actual} exceeds the cap of {cap}")]
    LimitExceeded {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid tree decomposition: {0}")]
    Decomposition(String),

    #[error("invalid CSP instance: {0}")]
    Csp(String),

    #[error("line {line}: {message} (token `{token}`)")]
    Parse {
        line: usize,
        token: String,
        message: String,
    },

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
