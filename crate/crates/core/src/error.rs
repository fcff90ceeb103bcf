use thiserror::Error;

/// Errors raised by the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("association scheme axiom violated: {0}")]
    AxiomViolation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("minimal polynomial check failed: {0}")]
    MinimalPolynomial(String),

    #[error("eigenvalue is not an integer: {0}")]
    NonIntegerEigenvalue(String),

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("cannot generate a module from the zero vector")]
    ZeroVector,

    #[error("module certification failed: {0}")]
    Certification(String),

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("not a relative design: {0}")]
    NotADesign(String),

    #[error("enumeration budget exceeded: {candidates} candidate sets > {budget}")]
    BudgetExceeded { candidates: u128, budget: u128 },

    #[error("mismatched cyclotomic order: {0} vs {1}")]
    MismatchedOrder(u32, u32),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
