use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed header: {reason}")]
    MalformedHeader { path: PathBuf, reason: String },

    #[error("{path}: unsupported maxval {maxval} (only 255 is accepted)")]
    UnsupportedMaxval { path: PathBuf, maxval: u32 },

    #[error("{path}: truncated pixel data (expected {expected} bytes, found {found})")]
    TruncatedPixelData {
        path: PathBuf,
        expected: usize,
        found: usize,
    },

    #[error("{path}: byte {value} at offset {offset} is not a valid class label")]
    InvalidClassByte {
        path: PathBuf,
        value: u8,
        offset: usize,
    },

    #[error("dimension mismatch: expected {expected_width}x{expected_height}, got {width}x{height}")]
    DimensionMismatch {
        expected_width: u32,
        expected_height: u32,
        width: u32,
        height: u32,
    },

    #[error("empty frame sequence")]
    EmptySequence,

    #[error("sequence has {len} frame(s), need at least {min}")]
    SequenceTooShort { len: usize, min: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("brightness distortion undefined for zero expected color")]
    ZeroAlpha,

    #[error("scene spec line {line}: {reason}")]
    SpecParse { line: usize, reason: String },

    #[error("object {index} does not fit the {width}x{height} frame")]
    ObjectTooLarge {
        index: usize,
        width: u32,
        height: u32,
    },

    #[error("unknown algorithm id {0:?} (expected framediff, statistical or mog)")]
    UnknownAlgorithm(String),

    #[error("predicted and truth sequences differ in length ({predicted} vs {truth})")]
    LengthMismatch { predicted: usize, truth: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
