use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("origin is not strictly interior to the body")]
    OriginNotInterior,
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("polygon is self-intersecting")]
    SelfIntersecting,
    #[error("set is not convex")]
    NonConvexSet,
    #[error("distance transform needs a nonempty source set")]
    EmptySource,
    #[error("distance field does not belong to this grid set")]
    MismatchedField,
    #[error("set and its complement must both be nonempty")]
    DegenerateSplit,
    #[error("field has {0} distinct values, more than the supported {max}", max = crate::functionals::MAX_LEVELS)]
    TooManyLevels(usize),
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("unknown shape `{0}`")]
    UnknownShape(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid grid domain: {0}")]
    InvalidDomain(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
