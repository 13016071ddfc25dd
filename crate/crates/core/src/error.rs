use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument violates an operation precondition. `constraint`
    /// names the violated relation, e.g. `r < theta/(18k)`.
    #[error("parameter error: {constraint} ({detail})")]
    Parameter { constraint: String, detail: String },

    /// Root extraction could not be certified by the argument principle or
    /// the residual bound.
    #[error("root reconciliation failed: {0}")]
    Reconciliation(String),

    #[error("eigenvalue solver failed: {0}")]
    Eigen(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid configuration: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(constraint: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Parameter {
            constraint: constraint.into(),
            detail: detail.into(),
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Short machine-readable tag used in error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parameter { .. } => "parameter",
            Error::Reconciliation(_) => "root_reconciliation",
            Error::Eigen(_) => "eigen",
            Error::InsufficientData(_) => "insufficient_data",
            Error::Config(_) => "schema",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
