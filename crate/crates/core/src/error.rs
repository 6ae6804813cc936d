use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("graph has {0} vertices; at most {max} are supported", max = crate::vset::MAX_VERTICES)]
    TooManyVertices(usize),
    #[error("{0:?} is not a component of the complement of the star of `{1}`")]
    NotAComponent(Vec<usize>, String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal check failed: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
