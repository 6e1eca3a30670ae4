use thiserror::Error;

/// Failure modes shared by every module.
///
/// The three kinds map onto distinct CLI exit codes: domain errors are bad
/// inputs, resource errors are desk-scale guardrails, and invariant
/// violations mean a checked identity failed to hold.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZonolatError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl ZonolatError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Self::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Self::Resource(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Self::InvariantViolation(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Domain(_) => 1,
            Self::Resource(_) => 2,
            Self::InvariantViolation(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, ZonolatError>;
