use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Structural problems found while validating a network document.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("variable name must not be empty")]
    EmptyName,
    #[error("variable `{0}` is declared more than once")]
    DuplicateVariable(String),
    #[error("variable `{var}` must have at least two states")]
    TooFewStates { var: String },
    #[error("variable `{var}` declares state `{state}` more than once")]
    DuplicateState { var: String, state: String },
    #[error("variable `{var}` has an empty state label")]
    EmptyState { var: String },
    #[error("node refers to undeclared variable `{0}`")]
    UndeclaredNode(String),
    #[error("variable `{0}` has more than one node")]
    DuplicateNode(String),
    #[error("variable `{0}` has no node")]
    MissingNode(String),
    #[error("node `{node}` lists undeclared parent `{parent}`")]
    UnknownParent { node: String, parent: String },
    #[error("node `{node}` lists parent `{parent}` more than once")]
    DuplicateParent { node: String, parent: String },
    #[error("parent relation has a cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("node `{node}` has {found} CPT rows, expected {expected}")]
    RowCount {
        node: String,
        expected: usize,
        found: usize,
    },
    #[error("node `{node}` CPT row {row} has {found} entries, expected {expected}")]
    RowWidth {
        node: String,
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("node `{node}` CPT row {row} has entry {value} outside [0, 1]")]
    BadProbability { node: String, row: usize, value: f64 },
    #[error("node `{node}` CPT row {row} sums to {sum}, expected 1")]
    RowSum { node: String, row: usize, sum: f64 },
    #[error("network has {count} variables, enumeration cap is {max}")]
    TooManyVariables { count: usize, max: usize },
}

impl ValidationError {
    /// Name of the variable or node the diagnostic is about, when there is one.
    pub fn subject(&self) -> Option<&str> {
        match self {
            ValidationError::EmptyName | ValidationError::TooManyVariables { .. } => None,
            ValidationError::DuplicateVariable(v)
            | ValidationError::UndeclaredNode(v)
            | ValidationError::DuplicateNode(v)
            | ValidationError::MissingNode(v) => Some(v),
            ValidationError::TooFewStates { var }
            | ValidationError::DuplicateState { var, .. }
            | ValidationError::EmptyState { var } => Some(var),
            ValidationError::UnknownParent { node, .. }
            | ValidationError::DuplicateParent { node, .. }
            | ValidationError::RowCount { node, .. }
            | ValidationError::RowWidth { node, .. }
            | ValidationError::BadProbability { node, .. }
            | ValidationError::RowSum { node, .. } => Some(node),
            ValidationError::Cycle(path) => path.first().map(String::as_str),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read `{}`: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid network: {0}")]
    Invalid(#[from] ValidationError),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{var}` has no state `{state}`")]
    UnknownState { var: String, state: String },
    #[error("assignment does not bind `{0}`")]
    IncompleteAssignment(String),
    #[error("invalid evidence: {0}")]
    InvalidEvidence(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("evidence has probability zero")]
    ImpossibleEvidence,
    #[error("conditioning combination has posterior probability zero")]
    ZeroMassCondition,
    #[error("no virtual finding on `{0}` to refine")]
    UnknownFinding(String),
    #[error("invalid refinement: {0}")]
    InvalidRefinement(String),
    #[error(
        "mixture of conditional likelihoods {mixture:?} is not proportional to the original likelihood {original:?}"
    )]
    InconsistentMixture { original: Vec<f64>, mixture: Vec<f64> },
    #[error("enumeration space of {0} variables overflows")]
    EnumerationOverflow(usize),
    #[error("scenario step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}
