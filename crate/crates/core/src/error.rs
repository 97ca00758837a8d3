use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {vertex} is not in a graph with {vertex_count} vertices")]
    InvalidVertex { vertex: u64, vertex_count: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A computation would exceed a configured size cap.
    #[error("resource guard: {0}")]
    ResourceLimit(String),

    #[error("series arithmetic: {0}")]
    Series(String),

    #[error("least-squares fit: {0}")]
    Fit(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn limit(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit(_))
    }
}
