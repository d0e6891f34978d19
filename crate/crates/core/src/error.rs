use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Zero or non-finite coordinates, or an otherwise malformed argument.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Coincident, collinear or incident inputs where independence is required.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A horoball crosses a face plane or overlaps another horoball.
    #[error("packing violation: {0}")]
    PackingViolation(String),

    /// A scenario's constraints cannot be realised as a packing at this shape.
    #[error("scenario {scenario} infeasible at z = {z}: {constraint}")]
    Infeasible {
        scenario: String,
        z: f64,
        constraint: String,
    },

    /// An iterative method ran out of budget.
    #[error("no convergence: {message} (estimate {estimate:e}, error {error:e})")]
    NonConvergence {
        message: String,
        estimate: f64,
        error: f64,
    },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
