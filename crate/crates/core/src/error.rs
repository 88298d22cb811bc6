use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Input(String),
    /// Partition fails the equitability check at `vertex` against `cell`.
    #[error("partition is not equitable: vertex {vertex} sees a different weight into cell {cell} than its cell-mates")]
    NotEquitable { vertex: usize, cell: usize },
    /// An operation's documented precondition does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The numeric kernel did not produce a trustworthy result.
    #[error("numerical failure: {0}")]
    Numeric(String),
    /// Problem size exceeds a documented enumeration guard.
    #[error("size guard exceeded: {0}")]
    Guard(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
