use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain of the function being evaluated.
    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// A model or algorithm parameter failed validation.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: String, reason: String },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("dimension mismatch: {left} vs {right} components")]
    DimensionMismatch { left: usize, right: usize },

    #[error("coefficient sum is zero, partial-sum ratios are undefined")]
    DegenerateCoefficients,

    #[error("insufficient innovation history: need {needed} pre-sample values, have {available}")]
    InsufficientHistory { needed: usize, available: usize },

    #[error("point set too small: truncation level {u_min} exceeds the requested maximum {max_u}")]
    InsufficientAtoms { u_min: f64, max_u: f64 },

    #[error("invalid step function: {0}")]
    StepFunction(String),

    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
