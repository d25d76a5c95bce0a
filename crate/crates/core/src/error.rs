use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("cycle notation: {0}")]
    Parse(String),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{x} is not a generator of Z_{p}^* (order {order})")]
    NotGenerator { x: u64, p: u64, order: u64 },

    #[error("{a} has no inverse modulo {p}")]
    NotInvertible { a: u64, p: u64 },

    #[error("p = {0} is outside the supported range for p² constructions (3 ≤ p ≤ 97)")]
    PrimeOutOfRange(u32),

    #[error("p = 3 is outside the hypothesis p ≥ 5; pass the override to build it anyway")]
    PrimeTooSmall,

    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),

    #[error("transversal meets factors {offending:?} in a number of edges other than one")]
    TransversalCondition { offending: Vec<usize> },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("coloring is not proper ({0} clashes); acyclicity is undefined")]
    NotProper(usize),

    #[error("search too large: {0}")]
    SearchTooLarge(String),

    #[error("structure check failed for ({a},{b}): {detail}")]
    Structure { a: u32, b: u32, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
