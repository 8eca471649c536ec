//! Isolated execution of assembled Python code against test blocks.
//!
//! Every evaluation spawns a fresh interpreter running the runner shim and
//! talks to it over a JSON protocol on stdin/stdout:
//!
//! * request: `{"code": str, "tests": [str], "timeout_s": number}`
//! * response: `{"results": [{"status", "message", "duration_ms"}], "all_passed": bool}`
//!
//! The shim enforces a per-test timeout; the orchestrator kills the process
//! at twice the timeout as a hard backstop.

mod process;
mod scripted;

use std::time::Duration;

use sha2::{Digest, Sha256};
use soa_core::{AgentId, AgentTree, CoreError, TestReport};
use thiserror::Error;

pub use process::{ProcessSandbox, ShimRequest, ShimResponse, ShimResult, RUNNER_SHIM};
pub use scripted::ScriptedSandbox;

#[derive(Debug, Error)]
pub enum SandboxError {
    /// The interpreter or shim is unusable; raised once at construction.
    #[error("sandbox environment: {0}")]
    Environment(String),

    #[error("no tests to run for {0}")]
    NoTests(String),

    #[error("failed to run the test runner: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Runs code against tests in isolation.
pub trait Sandbox: Send + Sync {
    /// Evaluates `code` against `tests`; `tests` must be non-empty. Runner
    /// crashes and malformed output are folded into the report as
    /// error-status results rather than returned as errors.
    fn evaluate(&self, code: &str, tests: &[String], timeout: Duration) -> Result<TestReport, SandboxError>;
}

/// Hex SHA-256 of a codebase, recorded on each report.
pub fn codebase_digest(code: &str) -> String {
    hex::encode(Sha256::digest(code.as_bytes()))
}

/// Runs one agent's validation tests against the whole assembled codebase,
/// so functions that call into other agents' code resolve normally.
pub fn evaluate_agent_in_context(
    tree: &AgentTree,
    agent_id: &AgentId,
    sandbox: &dyn Sandbox,
    timeout: Duration,
) -> Result<TestReport, SandboxError> {
    let node = tree.node(agent_id)?;
    if node.spec.validation_tests.is_empty() {
        return Err(SandboxError::NoTests(format!("agent {agent_id} ({})", node.spec.name)));
    }
    let code = tree.assemble_codebase()?;
    sandbox.evaluate(&code, &node.spec.validation_tests, timeout)
}
