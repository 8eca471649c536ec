use serde::{Deserialize, Serialize};
use soa_core::python;
use soa_core::{normalize_source, AgentTree};

use crate::strip::strip_code;

/// Counts tokens in stripped source. Swap in a BPE counter to compare with
/// model-token figures.
pub trait Tokenizer: Send + Sync {
    fn count(&self, source: &str) -> Option<usize>;
}

/// Python lexical tokens: names, numbers, strings and operators.
#[derive(Debug, Clone, Copy, Default)]
pub struct LexicalTokenizer;

impl Tokenizer for LexicalTokenizer {
    fn count(&self, source: &str) -> Option<usize> {
        let tokens = python::tokenize(source).ok()?;
        Some(tokens.iter().filter(|t| t.kind.is_significant()).count())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentVolume {
    pub agent_id: String,
    pub depth: u32,
    pub chars: usize,
    pub tokens: usize,
    /// Counts are over raw source because stripping failed.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub raw: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub per_agent: Vec<AgentVolume>,
    pub total_chars: usize,
    pub total_tokens: usize,
    pub per_function_mean_chars: f64,
}

impl VolumeReport {
    fn from_entries(per_agent: Vec<AgentVolume>) -> Self {
        let total_chars = per_agent.iter().map(|a| a.chars).sum();
        let total_tokens = per_agent.iter().map(|a| a.tokens).sum();
        let per_function_mean_chars = if per_agent.is_empty() {
            0.0
        } else {
            total_chars as f64 / per_agent.len() as f64
        };
        Self {
            per_agent,
            total_chars,
            total_tokens,
            per_function_mean_chars,
        }
    }

    pub fn max_agent_chars(&self) -> usize {
        self.per_agent.iter().map(|a| a.chars).max().unwrap_or(0)
    }
}

fn measure(agent_id: &str, depth: u32, source: &str, tokenizer: &dyn Tokenizer) -> AgentVolume {
    let source = normalize_source(source);
    let (text, raw) = match strip_code(&source) {
        Ok(s) => (s, false),
        Err(e) => {
            log::warn!("agent {agent_id}: {e}; counting raw source");
            (source, true)
        }
    };
    AgentVolume {
        agent_id: agent_id.to_string(),
        depth,
        chars: text.chars().count(),
        tokens: tokenizer.count(&text).unwrap_or(0),
        raw,
    }
}

/// Volume of the latest code of every agent, in pre-order.
pub fn code_volume(tree: &AgentTree, tokenizer: &dyn Tokenizer) -> VolumeReport {
    let entries = tree
        .preorder()
        .into_iter()
        .filter_map(|id| {
            let node = tree.node(&id).ok()?;
            let source = node.latest_source()?;
            Some(measure(id.as_str(), node.depth, source, tokenizer))
        })
        .collect();
    VolumeReport::from_entries(entries)
}

/// Volume of a single source treated as one agent.
pub fn source_volume(source: &str, tokenizer: &dyn Tokenizer) -> VolumeReport {
    VolumeReport::from_entries(vec![measure("0", 1, source, tokenizer)])
}
