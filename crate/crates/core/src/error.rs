use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("support {0} is empty")]
    EmptySupport(usize),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("duplicate monomial {0:?}")]
    DuplicateMonomial(Vec<u32>),

    #[error("exponent arithmetic overflowed")]
    ExponentOverflow,

    #[error("invalid lifting range {0}: must be at least 2")]
    InvalidLiftingRange(u64),

    #[error("lifting is not fine after {attempts} attempt(s)")]
    NotFineLifting { attempts: usize },

    #[error("family of {supports} supports is not square in dimension {dim}")]
    NotSquare { supports: usize, dim: usize },

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("linear form does not separate the points")]
    NonSeparating,

    #[error("value {0} is not a root of the minimal polynomial")]
    NotARoot(String),

    #[error("minimal polynomial is not squarefree")]
    NotSquarefree,

    #[error("support containment violated: {0}")]
    SupportContainment(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures caused by floating-point path tracking rather
    /// than by malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Numerical(_) | Error::NonSeparating | Error::NotFineLifting { .. }
        )
    }
}
