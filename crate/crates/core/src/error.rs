use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation is undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("weight vectors need at least one coordinate and every coordinate must be > 0")]
    NonPositiveWeight,

    #[error("cap {cap} is below the valuation {valuation} of the input")]
    CapBelowValuation { cap: String, valuation: String },

    #[error("generator {0} is zero")]
    ZeroGenerator(usize),

    #[error("generator {0} has a nonzero constant term")]
    ConstantTermGenerator(usize),

    #[error("relation has arity {relation} but {generators} generators were supplied")]
    ArityMismatch { relation: usize, generators: usize },

    #[error("an algebra needs at least one generator")]
    EmptyAlgebra,

    #[error("basis is not exact (cap reached)")]
    BasisNotExact,

    #[error("basis is not minimal")]
    BasisNotMinimal,

    #[error("basis is not reduced")]
    BasisNotReduced,

    #[error("fan computations support 1 to 3 variables, got {0}")]
    UnsupportedDimension(usize),

    #[error("fan is incomplete: some cell hit the cap")]
    IncompleteFan,

    #[error("fan traversal became inconsistent: {0}")]
    InconsistentFan(String),

    #[error("invalid order specification: {0}")]
    InvalidOrder(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
