use thiserror::Error;

use crate::correlators::Classification;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different cohomology rings")]
    SpecMismatch,
    #[error("not a unit: {0}")]
    NotInvertible(String),
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("series constant term must be one")]
    ConstantTermNotOne,
    #[error("series truncations differ ({0} vs {1})")]
    TruncationMismatch(usize, usize),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error(
        "general type: l_1+...+l_m > n+1 (n = {n}, l_1+...+l_m = {sum}); no correlator formula"
    )]
    GeneralType { n: usize, sum: u32 },
    #[error("operation requires a {expected} model, got {actual}")]
    WrongClassification {
        expected: Classification,
        actual: Classification,
    },
    #[error("missing linear form for degree {0}")]
    MissingLambda(u32),
    #[error("coefficient of t^{exponent} is not a rational multiple of {expected}")]
    ErrorShape { exponent: i32, expected: String },
    #[error("degenerate model: {0}")]
    Degenerate(String),
    #[error("missing value for degree {0}")]
    MissingDegree(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operation needs a {0} ring")]
    ModeMismatch(&'static str),
    #[error("Schubert input is not symmetric in q1, q2")]
    NonSymmetric,
    #[error("out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
