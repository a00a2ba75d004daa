use thiserror::Error;

/// Error type shared by all bound engines.
///
/// The variants map one-to-one onto the tool's exit codes: `Domain` and
/// `Size` are validation failures, `Resource` and `Sampling` are budget
/// exhaustion, `Numerical` is non-convergence of an iterative kernel.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Invalid input or violated precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// A requested computation would exceed a configured dimension cap.
    #[error("size error: {0}")]
    Size(String),
    /// A requested computation would exceed the enumeration budget.
    #[error("resource error: {0}")]
    Resource(String),
    /// An iterative kernel failed to converge within its iteration cap.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// A sampling estimator exhausted its budget without a valid sample.
    #[error("sampling error: {0}")]
    Sampling(String),
}

pub type Result<T> = std::result::Result<T, Error>;
