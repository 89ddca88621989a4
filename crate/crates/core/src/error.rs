use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("singular configuration: {0}")]
    Singular(String),

    #[error("ill-conditioned computation: {0}")]
    Conditioning(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of the numerics themselves (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Conditioning(_) | Error::Quadrature(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
