use std::path::PathBuf;

use thiserror::Error;

use crate::types::Address;

/// Field-level parse failures; these end up inside ingestion rejections.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{kind}: expected {expected} bytes of hex, got {got} hex digits")]
    HexLength {
        kind: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{kind}: invalid hex digit")]
    HexDigit { kind: &'static str },
    #[error("invalid decimal integer {0:?}")]
    Decimal(String),
    #[error("unknown call type {0:?}")]
    CallType(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed {what} in {path}: {message}")]
    Format {
        path: PathBuf,
        what: &'static str,
        message: String,
    },
    #[error("time range is inverted: start {start} > end {end}")]
    InvertedRange { start: u64, end: u64 },
    #[error("unknown token {0}")]
    UnknownToken(Address),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
