use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {num_vertices} vertices")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge between {0} and {1}")]
    DuplicateEdge(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not biconnected")]
    NotBiconnected,
    #[error("rotation system is inconsistent: {0}")]
    InconsistentRotation(String),
    #[error("graph is not planar")]
    NonPlanar,
    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),
    #[error("virtual edge pairing is inconsistent: {0}")]
    InconsistentPairing(String),
    #[error("edge set is not a perfect matching: {0}")]
    NotPerfectMatching(String),
    #[error("graph has no perfect matching")]
    EmptyPmSet,
    #[error("matching does not correspond to a spin configuration")]
    ParityMismatch,
    #[error("vertex {vertex} has degree {degree}, expected at most 3")]
    DegreeTooHigh { vertex: usize, degree: usize },
    #[error("forced separator has {size} vertices, bound is {bound}")]
    SeparatorTooLarge { size: usize, bound: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
