//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("image vector has length {got}, expected {expected}")]
    ImageLength { expected: usize, got: usize },

    #[error("image entry {value} at position {position} is outside 1..={n}")]
    ImageRange { position: usize, value: usize, n: usize },

    #[error("chain size mismatch: {left} vs {right}")]
    ChainMismatch { left: usize, right: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexRange { index: usize, max: usize },

    #[error("chain size must be at least {min}, got {n}")]
    ChainTooSmall { n: usize, min: usize },

    #[error("cannot parse word token `{token}`")]
    WordToken { token: String },

    #[error("letter {letter} is outside the expected alphabet")]
    UnexpectedLetter { letter: String },

    #[error("a nonempty word is required here")]
    EmptyWord,

    #[error("exponent {ell} out of range 1..={max}")]
    ExponentRange { ell: usize, max: usize },

    #[error("presentation {name} is not defined for n = {n}")]
    UnsupportedChain { name: String, n: usize },

    #[error("generator elimination did not reproduce the expected reduced relation set: {0}")]
    TietzeMismatch(String),

    #[error("fuel must be positive")]
    ZeroFuel,

    #[error("rewrite system is not flagged complete")]
    IncompleteSystem,

    #[error("irreducible-word count exceeded the cap of {cap}; the normal-form language looks infinite")]
    IrreducibleCap { cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no factorization through image size {target} exists for {alpha}; this contradicts the generation argument")]
    FactorizationMissing { alpha: String, target: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
