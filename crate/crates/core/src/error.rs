use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised while building or analysing a group extension.
#[derive(Debug, Error)]
pub enum Error {
    /// Structural problem in an input table (shape or index range).
    #[error("malformed table at row {row}, column {col}: {reason}")]
    MalformedTable { row: usize, col: usize, reason: String },

    #[error("not a group: {reason}")]
    NotAGroup {
        reason: String,
        witness: Option<(usize, usize, usize)>,
    },

    #[error("group closure exceeded the order cap of {cap}")]
    OrderCapExceeded { cap: usize },

    #[error("not an action: {0}")]
    NotAnAction(String),

    #[error("twisted product is not associative at ({}, {}, {})", .witness.0, .witness.1, .witness.2)]
    NotAssociative { witness: (usize, usize, usize) },

    #[error("cocycle is not normalized: {0}")]
    BadNormalization(String),

    #[error("subset is not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("subgroup is not normal: conjugating {element} by {by} leaves the subgroup")]
    NotNormal { element: usize, by: usize },

    #[error("invalid extension: {0}")]
    InvalidExtension(String),

    #[error("irreducible decomposition failed: {0}")]
    DecompositionFailed(String),

    #[error("no irreducible character matches the twist of irrep {irrep} by {q}")]
    MatchFailed { irrep: usize, q: usize },

    #[error("no intertwiner found for irrep {irrep} and {q} after {attempts} attempts")]
    IntertwinerNotFound { irrep: usize, q: usize, attempts: usize },

    #[error("composition defect for irrep {irrep} at ({q1}, {q2}) is not scalar (residual {residual:e})")]
    NotScalar {
        irrep: usize,
        q1: usize,
        q2: usize,
        residual: f64,
    },

    #[error(
        "center dimensions disagree: commutant solve gives {solve}, structural parametrization gives {structural}"
    )]
    MismatchedCenters { solve: usize, structural: usize },

    #[error("element is not central (commutator residual {residual:e})")]
    NotCentral { residual: f64 },

    #[error("brute-force work {work} exceeds cap {cap}")]
    CapExceeded { work: u128, cap: u128 },

    #[error("pairing is numerically singular (condition number {cond:e})")]
    SingularPairing { cond: f64 },

    #[error("specialization {name} gives {special} but the general count is {general}")]
    SpecializationMismatch {
        name: String,
        special: usize,
        general: usize,
    },

    #[error("cannot parse input: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
