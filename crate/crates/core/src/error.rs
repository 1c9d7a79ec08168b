use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sequence of length {len} is too short for context order {order}")]
    SequenceTooShort { len: usize, order: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("symbol {symbol} outside alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: u32, alphabet: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("count matrix is inconsistent with the sequence: {0}")]
    Inconsistent(String),

    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("malformed bitstream: {0}")]
    Malformed(String),

    #[error("unsupported archive version {0}")]
    UnsupportedVersion(u8),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed PBM: {0}")]
    Pbm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
