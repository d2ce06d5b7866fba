use thiserror::Error;

/// Errors raised by the ranking library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum RankError {
    #[error("non-finite input: {value}")]
    NonFiniteInput { value: f64 },

    #[error("probability out of [0, 1]: {value}")]
    InvalidProbability { value: f64 },

    #[error("threshold fraction must lie strictly inside (0, 1): {value}")]
    InvalidThreshold { value: f64 },

    #[error("quantile level must lie strictly inside (0, 1): {p}")]
    QuantileDomain { p: f64 },

    #[error("confidence level must lie strictly inside (0, 1): {level}")]
    InvalidLevel { level: f64 },

    #[error("invalid rank matrix:\n{0}")]
    Validation(ValidationReport),

    #[error("matrix must be in canonical (higher-is-better) orientation")]
    NotCanonical,

    #[error("entity index {index} out of range (N = {n})")]
    EntityIndex { index: usize, n: usize },

    #[error("column index {index} out of range (m = {m})")]
    ColumnIndex { index: usize, m: usize },

    #[error("no common ranker for entity pair(s): {}", format_pairs(.pairs))]
    NoCommonRanker { pairs: Vec<(usize, usize)> },

    #[error("no ranker observed entities {s}, {t} and {target} simultaneously")]
    NoTripleOverlap { s: usize, t: usize, target: usize },

    #[error("baseline methods require complete data; {missing} cell(s) are missing")]
    IncompleteData { missing: usize },

    #[error("expected {expected} score intervals, got {got}")]
    IntervalCount { expected: usize, got: usize },

    #[error("confidence intervals are defined for the cpdp and ctpdp criteria, not {criterion}")]
    UnsupportedCriterion {
        criterion: crate::criteria::Criterion,
    },

    #[error("invalid scenario: {reason}")]
    InvalidScenario { reason: String },

    #[error(
        "true scores are tied for entities {a} and {b}; coverage against true ranks is undefined"
    )]
    TiedTruth { a: usize, b: usize },

    #[error("missingness injection failed to produce a usable pattern after {attempts} attempts")]
    MissingnessRejected { attempts: u32 },
}

fn format_pairs(pairs: &[(usize, usize)]) -> String {
    let shown: Vec<String> = pairs
        .iter()
        .take(8)
        .map(|(k, i)| format!("({k}, {i})"))
        .collect();
    let mut s = shown.join(", ");
    if pairs.len() > 8 {
        s.push_str(&format!(", ... ({} total)", pairs.len()));
    }
    s
}

/// Every violation found while validating a rank matrix.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationIssue {
    /// Fewer than two entities.
    TooFewEntities { n: usize },
    /// No ranker columns at all.
    NoRankers,
    /// A rank value of zero (ranks are positive integers).
    NonPositiveValue { entity: usize, column: usize },
    /// The same rank value appears twice within one ranker's column.
    DuplicateRank { column: usize, value: u32 },
    /// A column with no observed entries.
    EmptyColumn { column: usize },
    /// Row count does not match the entity list.
    ShapeMismatch { expected: usize, got: usize },
}

impl std::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidationIssue::TooFewEntities { n } => {
                write!(f, "need at least 2 entities, got {n}")
            }
            ValidationIssue::NoRankers => write!(f, "need at least 1 ranker column"),
            ValidationIssue::NonPositiveValue { entity, column } => {
                write!(
                    f,
                    "non-positive rank for entity {entity} in column {column}"
                )
            }
            ValidationIssue::DuplicateRank { column, value } => {
                write!(f, "duplicate rank value {value} in column {column}")
            }
            ValidationIssue::EmptyColumn { column } => {
                write!(f, "column {column} has no observed entries")
            }
            ValidationIssue::ShapeMismatch { expected, got } => {
                write!(f, "expected {expected} rows of values, got {got}")
            }
        }
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for issue in &self.issues {
            writeln!(f, "  - {issue}")?;
        }
        Ok(())
    }
}
