use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cascade has no reshare events")]
    EmptyCascade,

    #[error("invalid event time {0}")]
    InvalidTime(f64),

    #[error("cascade has {activations} activations, fewer than the window size {window_size}")]
    TooSmallCascade {
        activations: usize,
        window_size: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series of length {len} is shorter than smoothing width {width}")]
    SeriesTooShort { len: usize, width: usize },

    #[error("no motif instances to choose a seed from")]
    NoInstances,

    #[error("instance list mixes motif patterns")]
    MixedPatterns,

    #[error("samples too small for a two-sample test (sizes {0} and {1}, need at least 2 each)")]
    UndersizedSample(usize, usize),

    #[error("no cascade passed the size filter")]
    NoRetainedCascades,

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
