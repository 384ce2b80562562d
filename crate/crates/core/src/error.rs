use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument is not in the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("invalid simplicial map: {0}")]
    InvalidMap(String),
    /// Malformed or inconsistent user input (files, filtrations, perversities).
    #[error("invalid input: {0}")]
    Input(String),
    #[error("topology construction failed: {0}")]
    Topology(String),
    /// A law the algorithm relies on did not hold.
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
