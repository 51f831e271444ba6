use thiserror::Error;

/// Crate-wide error type. Every fallible operation maps onto one of these
/// stable variants; the CLI relies on the grouping for its exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is singular (determinant zero)")]
    SingularMatrix,

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("invalid graph of groups: {}", issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
    Validation { issues: Vec<Issue> },

    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),

    #[error("bad builtin parameters: {0}")]
    BadParams(String),

    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("search radius {0} too small to certify the minimum displacement")]
    RadiusTooSmall(usize),

    #[error("embedding not applicable: {0}")]
    NotApplicable(String),

    #[error("domain error: {0}")]
    DomainError(String),
}

/// One structured diagnostic produced by graph-of-groups validation.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Issue {
    pub code: &'static str,
    pub location: String,
    pub message: String,
}

impl std::fmt::Display for Issue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}: {}", self.code, self.location, self.message)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
