use std::io;
use std::path::PathBuf;

use softmode_core::{NoiseError, ParamError, SteadyStateError, SweepError};

/// Everything that can stop an invocation. The variant decides the exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read config file {}: {source}", path.display())]
    Config { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Physics(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Physics(_) => 2,
            _ => 1,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<SteadyStateError> for CliError {
    fn from(e: SteadyStateError) -> Self {
        match e {
            SteadyStateError::Params(p) => p.into(),
            other => CliError::Physics(other.to_string()),
        }
    }
}

impl From<NoiseError> for CliError {
    fn from(e: NoiseError) -> Self {
        match e {
            NoiseError::Params(p) => p.into(),
            NoiseError::SteadyState(s) => s.into(),
            NoiseError::ResonantRequiresZeroDetuning => {
                CliError::Invalid(format!("{e}; pass --full-formula for a detuned cavity"))
            }
            other => CliError::Physics(other.to_string()),
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::InvalidSpec(_) => CliError::Invalid(e.to_string()),
            SweepError::Params(p) => p.into(),
            SweepError::Noise(n) => n.into(),
            SweepError::UnstableBase(_) => CliError::Physics(e.to_string()),
        }
    }
}
