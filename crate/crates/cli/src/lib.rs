//! Experiment runner behind the `accelprox` binary: configuration, method
//! dispatch and CSV output for the figure presets and the certificate report.

pub mod config;
pub mod runner;

pub use config::{Experiment, MethodSpec, Overrides, RunConfig};
pub use runner::{certificate_csv, instance_csv, run_experiment};

/// Failure of a run, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    /// Exit code 1.
    #[error("configuration error: {0}")]
    Config(String),
    /// Exit code 2.
    #[error("numerical failure: {0}")]
    Numerical(accelprox::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Numerical(_) => 2,
            RunError::Config(_) | RunError::Io(_) => 1,
        }
    }
}

impl From<accelprox::Error> for RunError {
    fn from(e: accelprox::Error) -> Self {
        if e.is_numerical() {
            RunError::Numerical(e)
        } else {
            RunError::Config(e.to_string())
        }
    }
}
