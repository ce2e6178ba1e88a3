use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of a physics or math function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Data file could not be parsed.
    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    /// A record violates one of its invariants.
    #[error("record `{record}` violates rule: {rule}")]
    Invariant { record: String, rule: String },

    /// A referenced record does not exist.
    #[error("unknown {kind} record `{name}`")]
    UnknownRecord { kind: &'static str, name: String },

    /// Required data is missing from a record.
    #[error("record `{record}` is missing {what}")]
    MissingData { record: String, what: &'static str },

    /// The adaptive integrator could not proceed.
    #[error("step size underflow at t = {t:e} s (h = {h:e} s); the system is stiff at this tolerance, try relaxing tol")]
    Stiff { t: f64, h: f64 },

    /// Filesystem problem.
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },

    /// Scenario-level wrapper.
    #[error("scenario {scenario}: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors that originate from bad input files rather than physics.
    pub fn is_parse(&self) -> bool {
        match self {
            Error::Parse { .. } | Error::Io { .. } => true,
            Error::Scenario { source, .. } => source.is_parse(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
