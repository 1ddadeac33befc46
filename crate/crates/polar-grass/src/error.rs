//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("reduction polynomial {0:?} is reducible over GF({1})")]
    ReduciblePolynomial(Vec<u16>, u32),
    #[error("field order {order} exceeds the configured bound {bound}")]
    OrderTooLarge { order: u64, bound: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("field of extension degree {0} has no involution")]
    NoInvolution(u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("budget exceeded: predicted {predicted} exceeds budget {budget}")]
    BudgetExceeded { predicted: u128, budget: u128 },
    #[error("unknown vertex id {0}")]
    UnknownVertex(u32),
    #[error("graph too large for this encoding: {0} vertices")]
    GraphTooLarge(usize),
    #[error("graph is not connected")]
    NotConnected,
    #[error("adjacency is not symmetric and irreflexive")]
    BadAdjacency,
    #[error("incidence violation: {0}")]
    IncidenceViolation(String),
    #[error("vertex set is not a clique: {0} and {1} are non-adjacent")]
    NotAClique(u32, u32),
    #[error("maximal clique is neither a star nor a top: {0}")]
    Unclassifiable(String),
    #[error("no apartment contains both subspaces")]
    NoCommonApartment,
    #[error("Witt index {0} is below 2; the form defines no polar space")]
    WittIndexTooSmall(usize),
    #[error("degenerate form: {0}")]
    DegenerateForm(String),
    #[error("polar space rank {rank} too small: need at least {need}")]
    RankTooSmall { rank: usize, need: usize },
    #[error("subspace is not a singular point of the polar space")]
    NotSingularPoint,
    #[error("invalid codomain vertex: {0}")]
    InvalidCodomainVertex(String),
    #[error("no distance oracle for this codomain: {0}")]
    OracleUnavailable(String),
    #[error("map is not an embedding: {0}")]
    NotEmbedding(String),
    #[error("bad descriptor: {0}")]
    BadDescriptor(String),
    #[error("suite not applicable: {0}")]
    SuiteInapplicable(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
