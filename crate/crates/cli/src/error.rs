use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("invalid spec file {path}: {source}")]
    SpecFormat { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", .source.kind())]
    Core { source: curvjet::Error },
    #[error("{} at xi = {xi}: {source}", .source.kind())]
    AtPoint { xi: f64, source: curvjet::Error },
    #[error("{failed} of {total} verification rows failed")]
    Verification { failed: usize, total: usize, domain: bool },
}

impl CliError {
    /// 2 for domain errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core { source } | CliError::AtPoint { source, .. } if source.is_domain() => 2,
            CliError::Verification { domain: true, .. } => 2,
            _ => 1,
        }
    }

    pub fn at(xi: f64) -> impl FnOnce(curvjet::Error) -> CliError {
        move |source| CliError::AtPoint { xi, source }
    }
}

impl From<curvjet::Error> for CliError {
    fn from(source: curvjet::Error) -> Self {
        CliError::Core { source }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
