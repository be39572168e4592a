use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Evaluation outside the region where a model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("no feasible design: {0}")]
    Infeasible(String),

    /// Broken internal invariant (for example a departure from an empty cell).
    #[error("logic error: {0}")]
    Logic(String),

    #[error("config error: {0}")]
    Config(String),

    /// A failure inside the event loop, tagged with the simulated time.
    #[error("at t = {time_s:.6} s: {source}")]
    AtTime {
        time_s: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn at_time(self, time_s: f64) -> Self {
        match self {
            e @ Error::AtTime { .. } => e,
            other => Error::AtTime {
                time_s,
                source: Box::new(other),
            },
        }
    }
}
