use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("vertex index {index} out of range for a quiver with {len} vertices")]
    VertexOutOfRange { index: usize, len: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} has {size} vertices, above the cap of {cap}")]
    SizeLimit {
        what: String,
        size: usize,
        cap: usize,
    },
    #[error("consecutive vertices {0:?} -> {1:?} are not joined by an arrow")]
    NotAPath(String, String),
    #[error("automorphism tau^-{s} o [{r}] of ZA_{k} does not act freely")]
    NonFreeAction { k: u32, s: u32, r: u32 },
    #[error("component through {vertex} of the {m}-th power is not isomorphic to the m-diagonal quiver ({n},{m})")]
    PrincipalMismatch { vertex: String, n: u32, m: u32 },
}

pub type Result<T, E = QuiverError> = std::result::Result<T, E>;
