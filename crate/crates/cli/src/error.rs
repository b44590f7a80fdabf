use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] csbattery::Error),

    #[error("{0}")]
    Usage(String),

    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("oracle deviation {max_deviation:e} exceeds tolerance {tolerance:e}")]
    OracleBreach { max_deviation: f64, tolerance: f64 },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use csbattery::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::OracleBreach { .. } => 5,
            CliError::Model(E::NoChargingPossible(_)) => 4,
            CliError::Model(E::ConvergenceFailure { .. } | E::PropertyViolation(_)) => 1,
            CliError::Model(_) => 2,
        }
    }
}
