use std::collections::BTreeMap;

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable tables differ: [{left}] vs [{right}]")]
    VarTableMismatch { left: String, right: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable `{0}` in table")]
    DuplicateVariable(String),

    #[error("assignment is missing variable `{0}`")]
    MissingAssignment(String),

    #[error("gcd of two zero polynomials is undefined")]
    BothZero,

    #[error("polynomial is not univariate in `{var}` (also depends on `{other}`)")]
    NotUnivariate { var: String, other: String },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("division is not exact: remainder is {remainder_terms} terms, nonzero ({value}) at {witness:?}")]
    DivisionNotExact {
        remainder_terms: usize,
        witness: BTreeMap<String, Rational>,
        value: Rational,
    },

    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix size {size} exceeds minor-expansion cap {cap}; use the Bareiss path")]
    SizeOverCap { size: usize, cap: usize },

    #[error("matrix dimensions inconsistent: {0}")]
    Dimension(String),

    #[error("both polynomials are constant in `{0}`")]
    DegenerateInput(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
