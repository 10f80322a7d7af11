use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("time {t} outside trace domain [0, {wall_time}]")]
    OutOfDomain { t: f64, wall_time: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("censored measure `{0}` cannot be used here")]
    Censored(String),

    #[error("malformed core activity: {0}")]
    MalformedActivity(String),

    #[error("mixed measures in one aggregation: {0}")]
    MixedMeasures(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("missing baseline: {0}")]
    MissingBaseline(String),

    #[error("instance too large for exhaustive enumeration ({0} items, limit {1})")]
    TooLarge(usize, usize),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
