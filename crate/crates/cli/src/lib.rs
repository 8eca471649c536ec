//! Run directories and the commands behind the `soa` binary.

mod commands;
mod manifest;

use std::path::Path;

use soa_bench::BenchError;
use soa_llm::LlmError;
use soa_protocol::ProtocolError;
use soa_sandbox::SandboxError;

pub use commands::{
    analyze_run, build_backend, format_volume_table, parse_spec, replay_run, run_humaneval, run_solve, HumanevalRun,
    ReplayRun, SolveRun, SpecFile,
};
pub use manifest::{create_run_dir, RunKind, RunManifest, RunOutcome, MANIFEST_FILE};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("environment: {0}")]
    Environment(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Environment(_) => 3,
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Failed(format!("{}: {e}", path.display()))
    }

    fn from_llm(e: LlmError) -> Self {
        match e {
            LlmError::Environment(m) => CliError::Environment(m),
            LlmError::Pack(p) => CliError::Config(p.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<LlmError> for CliError {
    fn from(e: LlmError) -> Self {
        CliError::from_llm(e)
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        match e {
            ProtocolError::Llm(LlmError::Environment(m))
            | ProtocolError::Generation {
                source: LlmError::Environment(m),
                ..
            }
            | ProtocolError::Sandbox(SandboxError::Environment(m)) => CliError::Environment(m),
            ProtocolError::Contract(m) => CliError::Config(m),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Solve(p) => p.into(),
            BenchError::Load { .. } | BenchError::Problem { .. } | BenchError::Contract(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Failed(other.to_string()),
        }
    }
}
