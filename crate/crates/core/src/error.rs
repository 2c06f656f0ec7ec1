use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid bit string: {0}")]
    InvalidString(String),

    #[error("invalid message: {0}")]
    InvalidMessage(String),

    #[error("invalid multiset: {0}")]
    InvalidMultiset(String),

    #[error("malformed input at line {line}, column {column}: {message}")]
    MalformedInput {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("weight vector is not symmetric at class {class} (w={left}, mirror w={right})")]
    SymmetryViolation { class: usize, left: u64, right: u64 },

    #[error("pair weight sigma_{index} = {value} is out of range")]
    SigmaOutOfRange { index: usize, value: i64 },

    #[error("inconsistent multiset: {0}")]
    InconsistentMultiset(String),

    #[error("multisets have different lengths ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },

    #[error("rank is out of range for {pairs} pairs")]
    RankOutOfRange { pairs: usize },

    #[error("pair sequence violates the ballot condition at position {position}")]
    InvalidSequence { position: usize },

    #[error("message does not fit the codebook capacity")]
    CapacityExceeded,

    #[error("not a codeword: {0}")]
    NotACodeword(String),

    #[error("length {n} exceeds the exhaustive search limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("no starred-bit choice satisfies the checksum")]
    NoValidPadding,

    #[error("uncorrectable: {0}")]
    Uncorrectable(String),

    #[error("ambiguous decode: {0} candidate codewords survive")]
    AmbiguousDecode(usize),

    #[error("invalid error specification: {0}")]
    InvalidError(String),

    #[error("multiset admits no single composition error")]
    NoAdmissibleError,
}

impl Error {
    /// Stable identifier used in diagnostics and across the C interface.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidString(_) => "invalid-string",
            Error::InvalidMessage(_) => "invalid-message",
            Error::InvalidMultiset(_) => "invalid-multiset",
            Error::MalformedInput { .. } => "malformed-input",
            Error::SymmetryViolation { .. } => "symmetry-violation",
            Error::SigmaOutOfRange { .. } => "sigma-out-of-range",
            Error::InconsistentMultiset(_) => "inconsistent-multiset",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::RankOutOfRange { .. } => "rank-out-of-range",
            Error::InvalidSequence { .. } => "invalid-sequence",
            Error::CapacityExceeded => "capacity-exceeded",
            Error::NotACodeword(_) => "not-a-codeword",
            Error::TooLarge { .. } => "too-large",
            Error::NoValidPadding => "no-valid-padding",
            Error::Uncorrectable(_) => "uncorrectable",
            Error::AmbiguousDecode(_) => "ambiguous-decode",
            Error::InvalidError(_) => "invalid-error",
            Error::NoAdmissibleError => "no-admissible-error",
        }
    }

    /// Whether the input was well formed but could not be decoded.
    pub fn is_decode_failure(&self) -> bool {
        matches!(
            self,
            Error::NotACodeword(_) | Error::Uncorrectable(_) | Error::AmbiguousDecode(_)
        )
    }

    /// Whether the error signals a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::NoValidPadding)
    }
}
