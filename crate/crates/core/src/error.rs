use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("subgroup is not normal in the ambient group")]
    NotNormal,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("subgroup has infinite index")]
    InfiniteIndex,
    #[error("depth exhausted: {0}")]
    DepthExhausted(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("ring mismatch")]
    RingMismatch,
    #[error("primality of a component could not be certified: {0}")]
    IndecisivePrimality(String),
    #[error("lemma 7 violation: {0}")]
    Lemma7Violation(String),
    #[error("hypothesis failed at index {index}: {clause}")]
    HypothesisFailed { index: usize, clause: String },
    #[error("module too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error("module is not irreducible")]
    NotIrreducible,
    #[error("search bound exhausted: {0}")]
    BoundExhausted(String),
    #[error("annihilator not captured at degree bound {0}")]
    AnnihilatorDegreeBound(usize),
    #[error("mu-cardinality sequence increases at index {0}")]
    MonotonicityViolation(usize),
    #[error("conclusion failed: {0}")]
    ConclusionFailed(String),
    #[error("factorization budget exhausted")]
    FactorBudget,
}

pub type Result<T> = std::result::Result<T, Error>;
