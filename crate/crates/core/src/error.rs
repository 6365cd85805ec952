//! Error taxonomy shared by every module.

use alloc::string::String;

/// Failures surfaced by the library.
///
/// `Structural` and `Domain` are caller errors; `InternalInvariant` signals a
/// bug (a state the algorithms promise is unreachable on validated input).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Shapes disagree (row lengths vs partition, declared n vs rows, ...).
    #[error("structural error: {0}")]
    Structural(String),

    /// Arguments outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operation requires a more specific instance class.
    #[error("unsupported class: {operation} requires {required}, got {actual}")]
    UnsupportedClass {
        operation: &'static str,
        required: &'static str,
        actual: crate::instance::InstanceClass,
    },

    /// Bid-distribution reconstruction produced a decreasing CDF.
    #[error("reconstruction error: row {row} has negative mass on column {column}")]
    Reconstruction { row: crate::instance::BidderId, column: usize },

    /// The adaptive quadrature oracle did not converge.
    #[error("oracle failure: {0}")]
    OracleFailure(String),

    /// A state the algorithms promise is unreachable on validated input.
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InternalInvariant(_) | Error::Reconstruction { .. } => 2,
            _ => 1,
        }
    }
}
