use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty child sequence")]
    EmptyInput,
    #[error("negative entry {value} at position {index}")]
    NegativeEntry { index: usize, value: i64 },
    #[error("entries sum to {sum}, expected n - 1 = {expected}")]
    SumMismatch { sum: i128, expected: usize },
    #[error("cannot parse sequence: {0}")]
    Parse(String),
    #[error("degenerate child sequence (a permutation of 1,...,1,0)")]
    DegenerateSequence,
    #[error("not a tree sequence: partial sum drops below zero at index {index}")]
    NotTreeSequence { index: usize },
    #[error("enumeration cap of {cap} trees exceeded")]
    CapExceeded { cap: u64 },
    #[error("subdivision plan has {got} slots, expected {expected}")]
    PlanLengthMismatch { expected: usize, got: usize },
    #[error("reduced tree has a unary node ({node})")]
    UnaryNodeInReduced { node: usize },
    #[error("tree is a path; its reduction has a single node")]
    PurePath,
    #[error("bound undefined for |c|^2 = 0")]
    ZeroNormSq,
    #[error("variance proxy must be positive, got {0}")]
    NonPositiveVariance(f64),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
}

pub type Result<T> = std::result::Result<T, Error>;
