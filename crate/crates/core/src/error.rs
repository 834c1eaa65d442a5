use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A formula was evaluated outside the region where it is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter or input failed validation.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A matrix could not be factorized, even after jitter escalation.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A failure inside a sampler sweep.
    #[error("sweep {sweep}: {source}")]
    AtSweep {
        sweep: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for validation failures (as opposed to numeric or I/O failures).
    pub fn is_validation(&self) -> bool {
        match self {
            Error::AtSweep { source, .. } => source.is_validation(),
            _ => matches!(self, Error::Invalid(_) | Error::Domain(_) | Error::Csv { .. }),
        }
    }

    pub fn is_numeric(&self) -> bool {
        match self {
            Error::AtSweep { source, .. } => source.is_numeric(),
            _ => matches!(self, Error::Numeric(_)),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
