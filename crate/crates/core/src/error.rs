use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid point cloud: {0}")]
    InvalidCloud(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Idx(#[from] IdxError),

    #[error("diagram format: {0}")]
    DiagramFormat(String),

    #[error("homology dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("diagram has essential points but no essential cap was given")]
    EssentialWithoutCap,

    #[error("sampling failed after {attempts} attempts")]
    SamplingFailed { attempts: usize },

    #[error("optimization diverged at step {step}")]
    Diverged {
        step: usize,
        partial: Box<crate::topo_opt::Trajectory>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Failures while decoding an IDX file. Each malformation is reported distinctly.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdxError {
    #[error("IDX header truncated: {0} bytes, need 16")]
    TruncatedHeader(usize),

    #[error("IDX magic mismatch: 0x{0:08x}, expected 0x00000803")]
    BadMagic(u32),

    #[error("IDX tensor has {0} dimensions, expected 3")]
    DimensionCount(u8),

    #[error("IDX payload truncated: {actual} bytes, header declares {expected}")]
    TruncatedPayload { expected: usize, actual: usize },

    #[error("IDX payload has {actual} bytes, header declares {expected}")]
    TrailingBytes { expected: usize, actual: usize },
}
