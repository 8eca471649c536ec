use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::spec::FunctionSpec;

/// Hierarchical agent identifier: the root is `0`, its children `0.0`,
/// `0.1`, and so on. Ids are assigned from tree position, so they are stable
/// across runs regardless of scheduling.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(String);

impl AgentId {
    pub fn root() -> Self {
        AgentId("0".to_string())
    }

    pub fn child(&self, index: usize) -> Self {
        AgentId(format!("{}.{index}", self.0))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for AgentId {
    fn from(s: &str) -> Self {
        AgentId(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentKind {
    /// Writes a skeleton and delegates its subfunctions.
    Mother,
    /// Writes a complete function; never delegates.
    Child,
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentKind::Mother => f.write_str("mother"),
            AgentKind::Child => f.write_str("child"),
        }
    }
}

/// Kind of an agent created at `new_agent_depth`: agents on the last level
/// are Children, everything above is a Mother.
pub fn decide_kind(new_agent_depth: u32, max_depth: u32) -> Result<AgentKind> {
    if new_agent_depth < 1 || new_agent_depth > max_depth {
        return Err(CoreError::DepthOutOfRange {
            depth: new_agent_depth,
            max_depth,
        });
    }
    Ok(if new_agent_depth == max_depth {
        AgentKind::Child
    } else {
        AgentKind::Mother
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Initial,
    Revised,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeVersion {
    pub iteration: u32,
    pub provenance: Provenance,
    pub source: String,
}

/// Append-only store of the code an agent has written.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CodeMemory {
    versions: Vec<CodeVersion>,
}

impl CodeMemory {
    pub fn versions(&self) -> &[CodeVersion] {
        &self.versions
    }

    pub fn is_empty(&self) -> bool {
        self.versions.is_empty()
    }

    pub fn latest(&self) -> Option<&CodeVersion> {
        self.versions.last()
    }

    pub fn latest_source(&self) -> Option<&str> {
        self.latest().map(|v| v.source.as_str())
    }

    /// Appends a version. The first version is the initial draft and must
    /// be at iteration 0; later ones are revisions at non-decreasing
    /// iterations. Sources are stored LF-normalized without trailing
    /// newlines.
    pub(crate) fn append(&mut self, source: &str, iteration: u32) -> std::result::Result<(), String> {
        let provenance = if self.versions.is_empty() {
            if iteration != 0 {
                return Err(format!("initial version must be at iteration 0, got {iteration}"));
            }
            Provenance::Initial
        } else {
            let last = self.versions.last().map_or(0, |v| v.iteration);
            if iteration < last || iteration == 0 {
                return Err(format!(
                    "revision iteration {iteration} must be >= 1 and >= previous iteration {last}"
                ));
            }
            Provenance::Revised
        };
        self.versions.push(CodeVersion {
            iteration,
            provenance,
            source: normalize_source(source),
        });
        Ok(())
    }

    /// Checks the memory invariants on deserialized data.
    pub(crate) fn check(&self) -> std::result::Result<(), String> {
        for (i, v) in self.versions.iter().enumerate() {
            let initial = v.provenance == Provenance::Initial;
            if initial != (i == 0) {
                return Err("exactly the first version must be initial".into());
            }
            if i > 0 && v.iteration < self.versions[i - 1].iteration {
                return Err("iterations decrease".into());
            }
        }
        Ok(())
    }
}

/// LF line endings, no trailing newlines.
pub fn normalize_source(source: &str) -> String {
    source
        .replace("\r\n", "\n")
        .replace('\r', "\n")
        .trim_end_matches('\n')
        .to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentNode {
    pub id: AgentId,
    pub kind: AgentKind,
    pub depth: u32,
    pub parent: Option<AgentId>,
    pub children: Vec<AgentId>,
    pub spec: FunctionSpec,
    #[serde(rename = "versions")]
    pub memory: CodeMemory,
}

impl AgentNode {
    pub fn latest_source(&self) -> Option<&str> {
        self.memory.latest_source()
    }
}

/// What an agent sees of its parent during a modification round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperObservation {
    pub feedback: String,
    pub code_before: String,
    pub code_after: String,
}

impl UpperObservation {
    pub fn new(
        feedback: impl Into<String>,
        code_before: impl Into<String>,
        code_after: impl Into<String>,
    ) -> Option<Self> {
        let obs = Self {
            feedback: feedback.into(),
            code_before: code_before.into(),
            code_after: code_after.into(),
        };
        let complete =
            !obs.feedback.trim().is_empty() && !obs.code_before.trim().is_empty() && !obs.code_after.trim().is_empty();
        complete.then_some(obs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decide_kind_examples() {
        assert_eq!(decide_kind(2, 2).unwrap(), AgentKind::Child);
        assert_eq!(decide_kind(2, 3).unwrap(), AgentKind::Mother);
        assert_eq!(decide_kind(1, 2).unwrap(), AgentKind::Mother);
        assert_eq!(decide_kind(1, 1).unwrap(), AgentKind::Child);
    }

    #[test]
    fn decide_kind_rejects_out_of_range() {
        assert!(matches!(
            decide_kind(0, 2),
            Err(CoreError::DepthOutOfRange { depth: 0, max_depth: 2 })
        ));
        assert!(decide_kind(3, 2).is_err());
    }

    #[test]
    fn memory_is_append_only_and_ordered() {
        let mut m = CodeMemory::default();
        assert!(m.append("x", 1).is_err());
        m.append("def f():\r\n    return 1\n\n", 0).unwrap();
        assert_eq!(m.latest_source(), Some("def f():\n    return 1"));
        assert!(m.append("y", 0).is_err());
        m.append("y", 2).unwrap();
        assert!(m.append("z", 1).is_err());
        m.append("z", 2).unwrap();
        assert_eq!(m.versions().len(), 3);
        assert_eq!(m.versions()[0].provenance, Provenance::Initial);
        assert_eq!(m.versions()[2].provenance, Provenance::Revised);
        m.check().unwrap();
    }

    #[test]
    fn observation_requires_all_fields() {
        assert!(UpperObservation::new("fb", "a", "b").is_some());
        assert!(UpperObservation::new("", "a", "b").is_none());
        assert!(UpperObservation::new("fb", " ", "b").is_none());
    }

    #[test]
    fn ids_are_hierarchical() {
        let root = AgentId::root();
        assert_eq!(root.child(1).child(0).as_str(), "0.1.0");
    }
}
