use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid input: {0}")]
    Input(String),
    /// Instance too large for dense enumeration or simulation.
    #[error("capacity exceeded: n = {n} (limit {limit})")]
    Capacity { n: usize, limit: usize },
    /// Malformed edge-list text.
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// Invalid optimizer or run configuration.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
