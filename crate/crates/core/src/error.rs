use thiserror::Error;

use crate::designs::DesignViolation;
use crate::pda::PdaViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("integer overflow computing {0}")]
    Overflow(String),

    #[error("non-integral quotient in {0}")]
    NonIntegral(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid design: {0}")]
    Design(#[from] DesignViolation),

    #[error("not a placement delivery array: {0}")]
    Pda(#[from] PdaViolation),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("insufficient shares: have {have}, need {need}")]
    InsufficientShares { have: usize, need: usize },

    #[error("singular submatrix for columns {0:?}")]
    Singular(Vec<usize>),

    #[error("payload length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("malformed demand vector: {0}")]
    MalformedDemand(String),

    #[error("decode failure for user {user} with online set {online}: {reason}")]
    DecodeFailure {
        online: String,
        user: String,
        reason: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
