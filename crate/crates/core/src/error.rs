use thiserror::Error;

use crate::model::ValidationReport;

/// Errors raised by the decision procedures, reductions and generators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {what}: {report}")]
    Invalid {
        what: &'static str,
        report: ValidationReport,
    },

    #[error("resource limit exceeded: {resource} > {limit}")]
    ResourceLimit {
        resource: &'static str,
        limit: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not applicable: {0}")]
    NotApplicable(&'static str),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(what: &'static str, report: ValidationReport) -> Self {
        Error::Invalid { what, report }
    }

    /// True for errors that signal an exhausted budget rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}
