use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("expected {expected} slot values, got {got}")]
    SlotCount { expected: usize, got: usize },

    #[error("operands belong to different evaluation contexts")]
    ContextMismatch,

    #[error("word width mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },

    #[error("invalid word width {0} (must be in 1..=64)")]
    InvalidWidth(usize),

    #[error("plaintext modulus {t} is smaller than 2^{bits}")]
    ModulusTooSmall { t: u64, bits: usize },

    #[error("plaintext modulus {0} is not prime")]
    NonPrimeModulus(u64),

    #[error("exponent must be at least 1, got {0}")]
    InvalidExponent(u64),

    #[error("ciphertext arity {components} exceeds the depth guard of {limit} components")]
    DepthGuard { components: usize, limit: usize },

    #[error("backend does not support batching ({slots} slots requested)")]
    BatchingUnsupported { slots: usize },

    #[error("malformed key data: {0}")]
    Format(String),
}
