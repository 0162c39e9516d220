use thiserror::Error;

/// Errors raised by the physics models.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] nhq_core::Error),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no real exceptional point: {0}")]
    NoExceptionalPoint(String),

    #[error("fiber is multi-mode: V = {v} ≥ 2.405")]
    MultiMode { v: f64 },

    #[error("no guided LP01 root: {0}")]
    NonGuiding(String),
}

pub type Result<T> = std::result::Result<T, Error>;
