use thiserror::Error;

use crate::kernel::Parity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live on different charts")]
    ChartMismatch,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable `{0}` in chart")]
    DuplicateVariable(String),

    #[error("parity mismatch for `{name}`: expected {expected}, found {found}")]
    ParityMismatch {
        name: String,
        expected: Parity,
        found: String,
    },

    #[error("weight mismatch for `{name}`: expected {expected}, found {found}")]
    WeightMismatch {
        name: String,
        expected: i64,
        found: String,
    },

    #[error("matrix pair is not inverse: {0}")]
    NotInverse(String),

    #[error("input depends on momenta: {0}")]
    MomentumDependence(String),

    #[error("shape violation: {0}")]
    Shape(String),

    #[error("structure is invalid: {0}")]
    StructureInvalid(String),

    #[error("negative exponent is only allowed on a Laurent generator: {0}")]
    NegativeExponent(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
