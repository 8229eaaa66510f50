use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("invalid bit string: {0}")]
    InvalidBits(String),
    #[error("position {position} out of range 1..={len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("decoding failed: {0}")]
    DecodeFailure(String),
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("transmitted codeword missing from the decoded list (trial {trial})")]
    MembershipViolation { trial: u64 },
}
