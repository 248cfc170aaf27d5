use thiserror::Error;

use crate::arith::Var;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable {var} is not allowed here (expected one of {allowed})")]
    VariableMismatch { var: Var, allowed: String },

    #[error("expected a univariate polynomial, found variables {0}")]
    NotUnivariate(String),

    #[error("coefficient {0} is not real")]
    NonRealCoefficient(String),

    #[error("cannot solve for y: the y-linear coefficient vanishes at the origin")]
    NotSolvable,

    #[error("polynomial is divisible by x^{multiplicity}")]
    XFactor { multiplicity: u32 },

    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("factors are not pairwise coprime")]
    NotCoprime,

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("centre of blow-up is not in Q(i): {0}")]
    NonRationalCenter(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
