use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed rational {0:?}, expected \"p/q\"")]
    MalformedRational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("insufficient partial quotients: need {needed}, got {available}")]
    InsufficientPartialQuotients { needed: usize, available: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },
    #[error("degenerate line: step vector is zero")]
    DegenerateLine,
    #[error("integer fast path overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}
