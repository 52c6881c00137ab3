use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("resize by {divisor} leaves an empty {rows}x{cols} frame")]
    EmptyResult { rows: usize, cols: usize, divisor: usize },
    #[error("frame is all zeros; normalization is undefined")]
    ZeroFrame,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("time step {t} is not after the previous step {previous}")]
    NonMonotonicTime { t: u64, previous: u64 },
    #[error("no segments to form a synaptic potential from")]
    EmptySegments,
    #[error("score {0} is outside [0, 100]")]
    InvalidScore(f64),
    #[error("memory store is empty")]
    EmptyStore,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unsupported audio format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt audio file: {0}")]
    CorruptFile(String),
    #[error("bitmap of {len} bits does not fit {rows}x{cols}")]
    DimensionMismatch { len: usize, rows: usize, cols: usize },
    #[error("not an RCLT1 archive")]
    BadMagic,
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
