use rankci::{RankError, ValidationIssue};
use thiserror::Error;

/// CLI-level errors. Every variant maps to a stable machine-readable code
/// printed as `error[CODE]: message`.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV in {path}: {message}")]
    Csv { path: String, message: String },

    #[error("input has no data rows")]
    EmptyInput,

    #[error("duplicate entity label: {label}")]
    DuplicateLabel { label: String },

    #[error("row {row}, column {column}: {message}")]
    BadCell {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Core(#[from] RankError),

    #[error("method ranks are missing entity {label}")]
    MissingEntityRank { label: String },

    #[error("unknown entity in ranks file: {label}")]
    UnknownEntity { label: String },

    #[error("invalid scenario file {path}: {message}")]
    ScenarioFile { path: String, message: String },

    #[error("{0}")]
    Args(String),
}

impl CliError {
    /// Stable error code for scripts.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "E_IO",
            CliError::Csv { .. } => "E_CSV",
            CliError::EmptyInput => "E_EMPTY_INPUT",
            CliError::DuplicateLabel { .. } => "E_DUP_LABEL",
            CliError::BadCell { .. } => "E_BAD_VALUE",
            CliError::Core(err) => match err {
                RankError::Validation(report) => {
                    if report
                        .issues
                        .iter()
                        .any(|i| matches!(i, ValidationIssue::DuplicateRank { .. }))
                    {
                        "E_DUP_RANK"
                    } else if report
                        .issues
                        .iter()
                        .any(|i| matches!(i, ValidationIssue::EmptyColumn { .. }))
                    {
                        "E_EMPTY_COLUMN"
                    } else if report
                        .issues
                        .iter()
                        .any(|i| matches!(i, ValidationIssue::NonPositiveValue { .. }))
                    {
                        "E_BAD_VALUE"
                    } else {
                        "E_VALIDATION"
                    }
                }
                RankError::NoCommonRanker { .. } => "E_NO_OVERLAP",
                RankError::InvalidLevel { .. } | RankError::QuantileDomain { .. } => "E_LEVEL",
                RankError::InvalidScenario { .. } => "E_SCENARIO",
                RankError::IncompleteData { .. } => "E_INCOMPLETE",
                _ => "E_RUNTIME",
            },
            CliError::MissingEntityRank { .. } => "E_MISSING_ENTITY",
            CliError::UnknownEntity { .. } => "E_UNKNOWN_ENTITY",
            CliError::ScenarioFile { .. } => "E_SCENARIO",
            CliError::Args(_) => "E_ARGS",
        }
    }
}
