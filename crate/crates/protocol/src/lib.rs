//! Generation and modification of agent trees, and the solve loops built
//! on them.

mod events;
mod solver;
pub mod synthetic;

use soa_core::{AgentTree, CoreError, FunctionSpec, RunConfig, TestReport, UpperObservation};
use soa_llm::{LlmClient, LlmError};
use soa_sandbox::{Sandbox, SandboxError};

pub use events::{payload_digest, read_events, Event, EventKind, EventLog};
pub use solver::{SolveResult, SolveStatus, Solver};

#[derive(Debug, thiserror::Error)]
pub enum ProtocolError {
    #[error("generation failed at `{agent_path}`: {source}")]
    Generation { agent_path: String, source: LlmError },
    #[error(transparent)]
    Llm(LlmError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Sandbox(SandboxError),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("event log: {0}")]
    Io(String),
}

pub fn generate_subtree(
    tree: &mut AgentTree,
    agent_id: &soa_core::AgentId,
    llm: &LlmClient,
    sandbox: &dyn Sandbox,
    config: &RunConfig,
) -> Result<(), ProtocolError> {
    Solver::new(llm, sandbox, config.clone())?.generate_subtree(tree, agent_id)
}

#[allow(clippy::too_many_arguments)]
pub fn modify_subtree(
    tree: &mut AgentTree,
    agent_id: &soa_core::AgentId,
    report: &TestReport,
    upper_obs: Option<&UpperObservation>,
    llm: &LlmClient,
    sandbox: &dyn Sandbox,
    config: &RunConfig,
    iteration: u32,
) -> Result<(), ProtocolError> {
    Solver::new(llm, sandbox, config.clone())?.modify_subtree(tree, agent_id, report, upper_obs, iteration)
}

pub fn solve(
    spec: FunctionSpec,
    config: &RunConfig,
    llm: &LlmClient,
    sandbox: &dyn Sandbox,
) -> Result<SolveResult, ProtocolError> {
    Solver::new(llm, sandbox, config.clone())?.solve(spec)
}

pub fn single_agent_solve(
    spec: FunctionSpec,
    config: &RunConfig,
    llm: &LlmClient,
    sandbox: &dyn Sandbox,
) -> Result<SolveResult, ProtocolError> {
    Solver::new(llm, sandbox, config.single_agent())?.single_agent_solve(spec)
}
