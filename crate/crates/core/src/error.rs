use thiserror::Error;

use crate::perm::Family;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree {0} is below the minimum of 3")]
    DegreeTooSmall(usize),
    #[error("degree {0} exceeds the configured cap")]
    DegreeTooLarge(usize),
    #[error("permutations of degree {0} and {1} cannot be composed")]
    DegreeMismatch(usize, usize),
    #[error("image {value} is outside [1, {degree}]")]
    ImageOutOfRange { value: usize, degree: usize },
    #[error("not a bijection: value {0} appears more than once")]
    DuplicateImage(usize),
    #[error("rank {rank} is outside [0, {degree}! - 1]")]
    RankOutOfRange { rank: usize, degree: usize },
    #[error("invalid transposition ({i} {j})")]
    InvalidTransposition { i: usize, j: usize },
    #[error("transposition ({i} {j}) does not act on degree {degree}")]
    TranspositionOutOfRange { i: usize, j: usize, degree: usize },
    #[error("{family} requires n >= {}, got {degree}", family.min_degree())]
    FamilyDegree { family: Family, degree: usize },
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("cannot parse `{0}`")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("operation needs the wheel family")]
    WrongFamily,
    #[error("copy {0} is outside [1, n]")]
    InvalidCopy(usize),
    #[error("cross edges need two distinct copies, got {0} twice")]
    SameCopy(usize),
    #[error("copy set is empty")]
    EmptyCopySet,
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
    #[error("vertex {0} given more than once")]
    DuplicateVertex(usize),
    #[error("expected 2 or 3 vertices, got {0}")]
    WrongArity(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MengerError {
    #[error("vertex {0} is not in the view")]
    NotInView(usize),
    #[error("source and target coincide at {0}")]
    SameVertex(usize),
    #[error("requested {k} paths but only {available} endpoints are available")]
    TooFewEndpoints { k: usize, available: usize },
    #[error("source {0} is also a target")]
    SourceInTargets(usize),
    #[error("only {found} of {wanted} disjoint paths exist; a separator of size {} is attached", cut.len())]
    InsufficientConnectivity {
        wanted: usize,
        found: usize,
        cut: Vec<usize>,
    },
    #[error("{u} and {v} are adjacent; the cut separates them once the direct edge is removed")]
    AdjacentPair { u: usize, v: usize, cut: Vec<usize> },
    #[error("view has fewer than two vertices")]
    TooSmall,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TripodError {
    #[error("terminals must be three distinct vertices of the view")]
    BadTerminals,
    #[error("view has {0} vertices; exhaustive search is limited to 40")]
    OracleScaleExceeded(usize),
    #[error("no structure found within budget ({steps} augmentation steps, {restarts} restarts)")]
    Budget { steps: u64, restarts: u32 },
    #[error("exhaustive search proved the target infeasible")]
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("the construction and the generic fallback both failed: {0}")]
    ConstructionFailed(String),
    #[error("a case step failed and strict mode forbids the generic fallback: {0}")]
    FallbackForbidden(String),
}

#[derive(Debug, Error)]
pub enum CertError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("schema version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum PairingError {
    #[error("structure failed verification: {0}")]
    Unverified(String),
}
