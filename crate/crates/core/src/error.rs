use thiserror::Error;

/// Errors raised across the crate. Variants map onto the CLI exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a homomorphism: {0}")]
    InvalidHom(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("invalid biproduct spec: {0}")]
    SpecInvalid(String),
    #[error("invalid construction spec: {0}")]
    InvalidSpec(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
