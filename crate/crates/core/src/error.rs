use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} is outside the supported range [3, 2^31]")]
    ModulusOutOfRange(u64),

    #[error("character index {index} is outside [0, {max}]")]
    CharacterIndex { index: u64, max: u64 },

    #[error("a non-principal character is required")]
    PrincipalCharacter,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("{what}: work {work} exceeds the enumeration guard {limit}")]
    Guard {
        what: &'static str,
        work: u128,
        limit: u128,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for resource-guard violations (as opposed to bad inputs).
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
