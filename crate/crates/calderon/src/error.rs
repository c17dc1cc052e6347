use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Weight parameters that put the weight outside the admissible class,
    /// or an evaluator that returns non-finite or non-positive values.
    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    /// An argument outside an operation's domain (non-positive time,
    /// empty function, zero trials, and so on).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed input data: weight grammar, CSV or JSON piece lists.
    #[error("parse error: {0}")]
    Parse(String),

    /// A supremum so close to zero that a ratio against it is meaningless.
    #[error("underflow: {0}")]
    Underflow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
