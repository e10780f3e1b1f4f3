use std::path::PathBuf;

use thiserror::Error;

/// A failed command, carrying the process exit status it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    /// Malformed JSON or a document of the wrong shape.
    #[error("{0}")]
    Schema(String),
    /// Bad flag combination not caught by argument parsing.
    #[error("{0}")]
    Usage(String),
    /// Inputs parse but break a model rule; one line per finding.
    #[error("{}", .0.join("\n"))]
    Model(Vec<String>),
    #[error("{0}")]
    Guard(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Model(_) => 1,
            CliError::Read { .. } | CliError::Write { .. } | CliError::Schema(_) | CliError::Usage(_) => 2,
            CliError::Guard(_) => 3,
        }
    }

    pub fn model(msg: impl ToString) -> Self {
        CliError::Model(vec![msg.to_string()])
    }
}

impl From<rct_core::LibraryError> for CliError {
    fn from(e: rct_core::LibraryError) -> Self {
        match e {
            rct_core::LibraryError::Schema { .. } => CliError::Schema(e.to_string()),
            rct_core::LibraryError::Invalid { .. } => CliError::model(e),
        }
    }
}

impl From<rct_core::FloorplanError> for CliError {
    fn from(e: rct_core::FloorplanError) -> Self {
        match e {
            rct_core::FloorplanError::Schema { .. } => CliError::Schema(e.to_string()),
            rct_core::FloorplanError::Invalid(issues) => {
                CliError::Model(issues.iter().map(|i| format!("floorplan: {i}")).collect())
            }
        }
    }
}

impl From<rct_core::RegionError> for CliError {
    fn from(e: rct_core::RegionError) -> Self {
        CliError::model(e)
    }
}

impl From<rct_core::RouteError> for CliError {
    fn from(e: rct_core::RouteError) -> Self {
        CliError::model(e)
    }
}

impl From<rct_core::DelayError> for CliError {
    fn from(e: rct_core::DelayError) -> Self {
        CliError::model(e)
    }
}

impl From<rct_core::skew::SearchError> for CliError {
    fn from(e: rct_core::skew::SearchError) -> Self {
        match e {
            rct_core::skew::SearchError::NodeLimit { .. } => CliError::Guard(e.to_string()),
            rct_core::skew::SearchError::Shape { .. } => CliError::model(e),
        }
    }
}

impl From<rct_core::skew::OracleError> for CliError {
    fn from(e: rct_core::skew::OracleError) -> Self {
        match e {
            rct_core::skew::OracleError::LimitExceeded { .. } => CliError::Guard(e.to_string()),
            rct_core::skew::OracleError::Shape { .. } => CliError::model(e),
        }
    }
}
