use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An element, function or distribution does not belong to the space it is used with.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// An enumeration or allocation guard was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("moment sequence not realizable: worst cell ({row}, {col}): {detail}")]
    MomentInfeasible {
        row: usize,
        col: usize,
        detail: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}
