use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the lifting pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("format error: {0}")]
    Format(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("{what}: dimension mismatch, expected {expected_w}x{expected_h}, found {found_w}x{found_h}")]
    DimensionMismatch {
        what: String,
        expected_w: usize,
        expected_h: usize,
        found_w: usize,
        found_h: usize,
    },

    #[error("invalid camera intrinsics: {0}")]
    InvalidIntrinsics(String),

    #[error("invalid depth sample (0 = no reading)")]
    InvalidDepth,

    #[error("pixel ({col}, {row}) outside {width}x{height} image")]
    OutOfBounds {
        col: i64,
        row: i64,
        width: usize,
        height: usize,
    },

    #[error("point has non-positive z = {0}")]
    NonPositiveZ(f64),

    #[error("mask {path} contains non-binary value {value} (expected 0 or 255)")]
    NonBinaryMask { path: PathBuf, value: u8 },

    #[error("duplicate instance id {0}")]
    DuplicateId(u32),

    #[error("no masked pixel with valid depth")]
    NoValidDepth,

    #[error("too few points: {available} available after trimming, need at least 2")]
    TooFewPoints { available: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("object outside camera frustum: {0}")]
    OutOfFrustum(String),

    #[error("invalid scene spec: {0}")]
    InvalidSpec(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn dims(what: impl Into<String>, expected: (usize, usize), found: (usize, usize)) -> Self {
        Error::DimensionMismatch {
            what: what.into(),
            expected_w: expected.0,
            expected_h: expected.1,
            found_w: found.0,
            found_h: found.1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
