use thiserror::Error;

use crate::litt::ExceptionClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("chain is not irreducible: state `{0}` cannot reach every other state")]
    NotIrreducible(String),

    #[error("chain is periodic with period {0}")]
    NotAperiodic(u64),

    #[error("singular matrix in exact solve")]
    SingularMatrix,

    #[error("source and target state must differ (both `{0}`)")]
    SameState(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("variance must be positive for an Edgeworth expansion")]
    DegenerateVariance,

    #[error("expected a zero-mean input, got mu = {0}")]
    NonZeroMean(f64),

    #[error("words have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("invalid word `{word}` for alphabet size {q}")]
    InvalidWord { word: String, q: u32 },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("operation requires a classic two-word game (+1 / -1, equal lengths, distinct words)")]
    NotClassic,

    #[error("chain would have {states} states, above the cap of {cap}")]
    AlphabetTooLarge { states: u128, cap: u64 },

    #[error("exceptional word pair: {0:?}")]
    ExceptionalPair(ExceptionClass),

    #[error("horizon n = {n} is shorter than the word length {ell}")]
    HorizonTooShort { n: u64, ell: usize },

    #[error("estimated working set of {estimate} bytes exceeds the cap of {cap} bytes")]
    ResourceCap { estimate: u128, cap: u128 },

    #[error("power iteration did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub const EXIT_EXCEPTIONAL: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_RESOURCE: u8 = 69;
pub const EXIT_INTERNAL: u8 = 70;

impl Error {
    /// Process exit status for the command-line tool.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::ResourceCap { .. } | Error::AlphabetTooLarge { .. } => EXIT_RESOURCE,
            Error::ExceptionalPair(_) => EXIT_EXCEPTIONAL,
            Error::Parse(_)
            | Error::InvalidChain(_)
            | Error::NotIrreducible(_)
            | Error::NotAperiodic(_)
            | Error::InvalidDistribution(_) => EXIT_DATA,
            Error::SingularMatrix | Error::NoConvergence(_) | Error::Inconsistent(_) => EXIT_INTERNAL,
            Error::SameState(_)
            | Error::UnknownState(_)
            | Error::DegenerateVariance
            | Error::NonZeroMean(_)
            | Error::LengthMismatch(..)
            | Error::InvalidWord { .. }
            | Error::InvalidGame(_)
            | Error::NotClassic
            | Error::HorizonTooShort { .. } => EXIT_USAGE,
        }
    }
}
