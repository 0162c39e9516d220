use thiserror::Error;

use crate::propagate::Trajectory;

/// Errors raised by the core numerics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The step size collapsed below the representable resolution.
    ///
    /// `partial` holds every output sample produced before the failure.
    #[error("integration failed at t = {t_last:e}: {reason}")]
    IntegrationFailure {
        t_last: f64,
        reason: String,
        partial: Box<Trajectory>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
