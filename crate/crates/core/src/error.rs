use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate distribution: sigma must be positive")]
    DegenerateDistribution,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("insufficient observations: need at least {needed}, got {got}")]
    InsufficientObservations { needed: usize, got: usize },

    #[error("insufficient residuals: need at least {needed}, got {got}")]
    InsufficientResiduals { needed: usize, got: usize },

    #[error("insufficient sample: both samples must be non-empty")]
    InsufficientSample,

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("invalid CV configuration: {0}")]
    InvalidCvConfig(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no observations")]
    NoObservations,

    #[error("unknown fixture {name:?}; available fixtures: {available}")]
    UnknownFixture { name: String, available: String },

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn at_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
