use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A state is not a member of the system's space.
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation was called with incoherent arguments.
    #[error("usage error: {0}")]
    Usage(String),

    /// A configured size cap was exceeded.
    #[error("resource cap exceeded: {what} (reached {reached}, cap {cap})")]
    Resource {
        what: String,
        reached: usize,
        cap: usize,
    },

    /// Iterative solver did not converge; carries the last two iterates.
    #[error("no convergence after {iterations} iterations (last {last}, previous {previous})")]
    NonConvergence {
        iterations: usize,
        last: f64,
        previous: f64,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
