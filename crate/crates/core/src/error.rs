use std::fmt;

/// Errors raised by evaluation, closed-form assembly and verification.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid order {0}: orders must be positive")]
    InvalidOrder(i64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid sum specification: {0}")]
    InvalidSpec(String),

    #[error("series diverges: {0}")]
    Divergent(String),

    #[error("evaluation point {point} is within {epsilon} of a pole")]
    PoleProximity { point: f64, epsilon: f64 },

    #[error("{kind} has no closed-form specialization for sequence {sequence}")]
    NotSpecialized { kind: String, sequence: String },

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("sample point lies outside the expansion disk: {0}")]
    OutsideDisk(String),

    #[error("unsupported sequence: {0}")]
    UnsupportedSequence(String),

    #[error("unknown {what} `{name}`")]
    Unknown { what: &'static str, name: String },
}

impl Error {
    pub(crate) fn param(msg: impl fmt::Display) -> Self {
        Error::InvalidParameter(msg.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
