use thiserror::Error;

use crate::agent::AgentId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("invalid function spec `{name}`: {reason}")]
    InvalidSpec { name: String, reason: String },

    #[error("agent depth {depth} outside 1..={max_depth}")]
    DepthOutOfRange { depth: u32, max_depth: u32 },

    #[error("unknown agent {0}")]
    UnknownAgent(AgentId),

    #[error("agent {id} cannot spawn children: {reason}")]
    Structural { id: AgentId, reason: String },

    #[error("function name `{0}` is already used in the tree")]
    DuplicateName(String),

    #[error("agent {id} ({name}) has no code to assemble")]
    EmptyMemory { id: AgentId, name: String },

    #[error("top-level definition `{0}` appears more than once in the assembly")]
    DuplicateDefinition(String),

    #[error("memory of agent {id}: {reason}")]
    Memory { id: AgentId, reason: String },

    #[error("invalid run configuration: {0}")]
    Config(String),

    #[error("tree invariant violated: {0}")]
    Invariant(String),

    #[error("tree file: {0}")]
    Serialization(String),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
