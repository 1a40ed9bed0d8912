use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unit parse error at position {position} (token `{token}`): {message}")]
    UnitParse {
        token: String,
        position: usize,
        message: String,
    },

    #[error("degenerate unit system: rank(D) = {rank} < {rows} active base units")]
    DegenerateUnits { rank: usize, rows: usize },

    #[error("output units not expressible from inputs")]
    NotExpressible,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("model evaluation failed at point {index}: {message}")]
    Model { index: usize, message: String },

    #[error("no eigenvalue gap: {0}")]
    NoGap(String),

    #[error("quadrature budget exceeded: {points} points requested, limit {limit}")]
    Budget { points: u128, limit: u128 },

    #[error("sample file {path}: {message}")]
    SampleFile { path: PathBuf, message: String },

    #[error("sample file {path}: non-finite value in data row {row}")]
    NonFinite { path: PathBuf, row: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by user-supplied input (files, arguments),
    /// as opposed to internal numerical failures.
    pub fn is_user_error(&self) -> bool {
        !matches!(self, Error::Numeric(_) | Error::Io(_))
    }
}
