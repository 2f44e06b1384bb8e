use thiserror::Error;

use crate::{EdgeId, VertexId};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: VertexId },
    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: VertexId, v: VertexId },
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("edge {{{u}, {v}}} has weight 0")]
    ZeroWeight { u: VertexId, v: VertexId },
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("failure set has {size} edges but at most {max} are allowed")]
    TooManyFailures { size: usize, max: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
