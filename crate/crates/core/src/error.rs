use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("source set is empty")]
    EmptySources,
    #[error("node {node} is out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },
    #[error("edge {{{u}, {v}}} has invalid length {length}: {reason}")]
    InvalidEdge {
        u: usize,
        v: usize,
        length: f64,
        reason: &'static str,
    },
    #[error("node {node} is not in the active set")]
    Inactive { node: usize },
    #[error("virtual node {id} is not declared")]
    UnknownVirtual { id: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("parent pointers contain a cycle through node {node}")]
    CyclicForest { node: usize },
    #[error("node {node} is not part of the forest")]
    NotInForest { node: usize },
    #[error("candidate set is empty")]
    EmptyCandidates,
    #[error("node {node} is not covered: distance {distance} to the virtual source exceeds {bound}")]
    CoveringViolation {
        node: usize,
        distance: f64,
        bound: f64,
    },
    #[error("{procedure} exceeded its iteration cap of {cap}")]
    IterationCap { procedure: &'static str, cap: usize },
    #[error("backbone cluster {cluster} has an empty backbone")]
    EmptyBackbone { cluster: usize },
    #[error("unknown generator kind `{0}`")]
    UnknownGenerator(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("audit found {violations} violation(s)")]
    AuditFailed { violations: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Process exit code for this error: 2 input, 3 audit, 4 iteration cap,
    /// 5 internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::AuditFailed { .. } => 3,
            Error::IterationCap { .. } => 4,
            Error::Invariant(_) | Error::CyclicForest { .. } | Error::EmptyBackbone { .. } => 5,
            _ => 2,
        }
    }
}
