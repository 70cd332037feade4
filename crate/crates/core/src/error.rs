use thiserror::Error;

use crate::group::AxiomReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a universe needs at least one element")]
    EmptyUniverse,
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("universe of size {size} exceeds the supported maximum {max}")]
    UniverseTooLarge { size: usize, max: usize },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("{0} lies outside the universe")]
    OutsideUniverse(String),
    #[error("operands live on different universes")]
    UniverseMismatch,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("{what}: size {size} exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("attribute `{attribute}` has no value for element `{element}`")]
    PartialAttribute { attribute: String, element: String },
    #[error("attribute `{attribute}` assigns element `{element}` more than once")]
    DuplicateAssignment { attribute: String, element: String },
    #[error("an attribute set must contain at least one attribute")]
    EmptyAttributeSet,
    #[error("the attribute set is not complete: its join is not the discrete partition")]
    NotCsca,

    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("group axioms violated: {0}")]
    InvalidGroup(Box<AxiomReport>),

    #[error("a basis on {expected} elements needs exactly {expected} vectors, got {got}")]
    WrongBasisSize { expected: usize, got: usize },
    #[error(
        "basis vectors are dependent (rank {rank}); vectors {dependent:?} sum to the empty set"
    )]
    RankDeficient { rank: usize, dependent: Vec<usize> },
    #[error("ket is expressed in basis `{found}` but `{expected}` is required")]
    BasisMismatch { expected: String, found: String },
    #[error("brackets and norms need the standard basis; ket is expressed in `{0}`")]
    NonStandardBasis(String),
    #[error("matrix must be {n}x{n}")]
    MatrixShape { n: usize },

    #[error("the empty state cannot be measured or conditioned on")]
    EmptyState,
    #[error("map is singular and therefore not a distinction-preserving evolution")]
    SingularMap,
}
