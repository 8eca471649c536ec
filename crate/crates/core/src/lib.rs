//! Domain model for a self-organizing tree of code-writing agents.
//!
//! The tree is rooted at a single Mother agent. Mothers write a host
//! function that calls unimplemented subfunctions and delegate each of
//! those to a newly spawned agent; agents on the last level (Children)
//! write complete functions. Every agent keeps its own append-only code
//! memory, and the final program is the assembly of every agent's latest
//! code.

pub mod agent;
pub mod config;
pub mod error;
pub mod python;
pub mod report;
pub mod spec;
pub mod tree;

pub use agent::{
    decide_kind, normalize_source, AgentId, AgentKind, AgentNode, CodeMemory, CodeVersion, Provenance, UpperObservation,
};
pub use config::{BackendDescriptor, RunConfig, SolveMode};
pub use error::{CoreError, Result};
pub use report::{TestReport, TestResult, TestStatus};
pub use spec::FunctionSpec;
pub use tree::{AgentTree, NameResolution, SpawnedSubtasks};
