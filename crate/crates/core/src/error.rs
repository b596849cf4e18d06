use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("invalid block index {block} (expected 1..={blocks})")]
    InvalidBlock { block: usize, blocks: usize },
    #[error("operation requires the integers, got {0}")]
    WrongRing(String),
    #[error("coefficient rings differ: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("composite of differentials is non-zero: {0}")]
    NotAComplex(String),
    #[error("matrix is not square: {0}")]
    NotSquare(String),
    #[error("degree {degree} out of range 0..={top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("truncations differ: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("truncation too small: need level {needed}, have {available}")]
    TruncationTooSmall { needed: usize, available: usize },
    #[error("element is not a cycle in degree {0}")]
    NotACycle(usize),
    #[error("divided power table is incomplete: {0}")]
    IncompleteTable(String),
    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),
    #[error("no solution: {0}")]
    NotSolvable(String),
    #[error("algebra is not commutative: x{0}*x{1} != x{1}*x{0}")]
    NotCommutative(usize, usize),
    #[error("algebra is not associative at (x{0}*x{1})*x{2}")]
    NotAssociative(usize, usize, usize),
    #[error("unit law fails for x{0}")]
    BadUnit(usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("division by a non-unit: {0}")]
    NotInvertible(String),
    #[error("submodule over {0} is not free")]
    NotFree(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
