use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] hst_ofdm_core::Error),
    #[error("io: {0}")]
    Io(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("rows from different configs cannot be merged ({expected} vs {found})")]
    ConfigMismatch { expected: String, found: String },
    #[error("scheme {scheme} is not available in {experiment}")]
    UnsupportedScheme {
        scheme: &'static str,
        experiment: &'static str,
    },
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Csv(e.to_string())
    }
}
