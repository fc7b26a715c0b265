use std::path::PathBuf;

use pcf_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("no database at {0}; run build-db first or drop --db to build one in memory")]
    MissingDb(PathBuf),

    #[error("{0} acceptance criteria failed")]
    SelftestFailed(usize),

    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }

    /// Machine-readable category and process exit status.
    pub fn category(&self) -> (&'static str, u8) {
        match self {
            CliError::Config(_) => ("config", 3),
            CliError::MissingDb(_) => ("missing-db", 5),
            CliError::SelftestFailed(_) => ("selftest", 10),
            CliError::Io { .. } => ("io", 8),
            CliError::Core(e) => match e {
                CoreError::UncoveredPrime(_) => ("uncovered-prime", 7),
                CoreError::DbFormat(_) => ("db-format", 6),
                CoreError::Io(_) => ("io", 8),
                CoreError::Inconsistent(_) | CoreError::NoCatalogMatch(_) => ("inconsistent", 9),
                _ => ("input", 4),
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
