use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource cap exceeded: {what} needs {count} > cap {cap}")]
    CapExceeded {
        what: String,
        count: u128,
        cap: u128,
    },

    #[error("not a cocycle: {0}")]
    NotACocycle(String),

    #[error("not an acyclic fibration: {0}")]
    NotAcyclicFibration(String),

    #[error("invalid defining system: {0}")]
    InvalidDefiningSystem(String),

    /// A construction that is supposed to succeed unconditionally did not.
    #[error("internal verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
