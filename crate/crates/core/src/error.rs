use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("node id {id} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { id: usize, node_count: usize },

    #[error("partition covers {got} nodes but graph has {expected}")]
    PartitionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shell histogram is empty")]
    EmptyHistogram,

    #[error("seed set is empty")]
    EmptySeeds,

    #[error("exact enumeration supports at most {max} edges, graph has {edges}")]
    TooManyEdges { edges: usize, max: usize },

    #[error("at least two seeds are required, got {0}")]
    TooFewSeeds(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
