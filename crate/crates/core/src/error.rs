use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("explicit prefix exhausted: digit {needed} requested, {available} available")]
    PrefixExhausted { needed: usize, available: usize },
    #[error("value is not irrational: {0}")]
    NotIrrational(String),
    #[error("forms coincide: ({q}, {p})")]
    IdenticalForms { q: String, p: String },
    #[error("precision cap exceeded: {0}")]
    PrecisionCap(String),
    #[error("{q} is not a jump point of this sequence")]
    NotAJumpPoint { q: String },
    #[error("fraction {p}/{q} is not reduced")]
    NotReduced { p: String, q: String },
    #[error("pair {p_prev}/{q_prev}, {p}/{q} is not unimodular")]
    NotUnimodular { p_prev: String, q_prev: String, p: String, q: String },
    #[error("argument outside domain: {0}")]
    DomainViolation(String),
    #[error("target outside admissible range: {0}")]
    RangeViolation(String),
    #[error("tail is equivalent to the golden ratio")]
    GoldenEquivalent,
    #[error("horizon too short: {0}")]
    InsufficientHorizon(String),
    #[error("invalid alpha spec `{spec}`: {reason}")]
    Parse { spec: String, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
