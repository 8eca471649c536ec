//! The agent hierarchy and the operations that grow and read it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::agent::{decide_kind, AgentId, AgentKind, AgentNode, CodeMemory};
use crate::error::{CoreError, Result};
use crate::python::{self, StatementKind};
use crate::spec::FunctionSpec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentTree {
    root: AgentId,
    max_depth: u32,
    /// Module-level code (imports, helpers given with the problem) emitted
    /// ahead of every agent's code.
    preamble: String,
    nodes: BTreeMap<AgentId, AgentNode>,
}

/// Outcome of making a proposed subtask name unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameResolution {
    pub spec: FunctionSpec,
    pub host_code: String,
    /// Original name, when a rename happened.
    pub renamed_from: Option<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpawnedSubtasks {
    /// Host code with call sites rewritten for any renamed subtasks.
    pub host_code: String,
    pub ids: Vec<AgentId>,
    pub warnings: Vec<String>,
}

/// On-disk shape of `tree.json`. Field order is the canonical key order.
#[derive(Serialize, Deserialize)]
struct TreeFile {
    root: AgentId,
    max_depth: u32,
    #[serde(default)]
    preamble: String,
    nodes: Vec<AgentNode>,
}

impl AgentTree {
    /// A tree holding only the root agent, whose kind follows from
    /// `max_depth` (a Child only in the single-agent configuration).
    pub fn new(root_spec: FunctionSpec, max_depth: u32) -> Result<Self> {
        if max_depth < 1 {
            return Err(CoreError::Config("max_depth must be at least 1".into()));
        }
        root_spec.validate()?;
        let root = AgentId::root();
        let node = AgentNode {
            id: root.clone(),
            kind: decide_kind(1, max_depth)?,
            depth: 1,
            parent: None,
            children: Vec::new(),
            spec: root_spec,
            memory: CodeMemory::default(),
        };
        Ok(Self {
            nodes: BTreeMap::from([(root.clone(), node)]),
            root,
            max_depth,
            preamble: String::new(),
        })
    }

    pub fn with_preamble(mut self, preamble: impl Into<String>) -> Self {
        self.preamble = crate::agent::normalize_source(&preamble.into());
        self
    }

    pub fn root(&self) -> &AgentId {
        &self.root
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    pub fn preamble(&self) -> &str {
        &self.preamble
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: &AgentId) -> Result<&AgentNode> {
        self.nodes.get(id).ok_or_else(|| CoreError::UnknownAgent(id.clone()))
    }

    pub fn root_node(&self) -> &AgentNode {
        &self.nodes[&self.root]
    }

    /// Every function name currently owned by an agent.
    pub fn names(&self) -> BTreeSet<String> {
        self.nodes.values().map(|n| n.spec.name.clone()).collect()
    }

    /// Creates an agent for `spec` under `parent`. The parent must be a
    /// Mother and the name must be unused; collisions are resolved by the
    /// caller through [`AgentTree::resolve_name_collision`] first.
    pub fn spawn_agent(&mut self, parent_id: &AgentId, spec: FunctionSpec) -> Result<AgentId> {
        let parent = self.node(parent_id)?;
        if parent.kind == AgentKind::Child {
            return Err(CoreError::Structural {
                id: parent_id.clone(),
                reason: "Child agents never delegate".into(),
            });
        }
        if parent.depth >= self.max_depth {
            return Err(CoreError::Structural {
                id: parent_id.clone(),
                reason: format!("already at maximum depth {}", self.max_depth),
            });
        }
        spec.validate()?;
        if self.nodes.values().any(|n| n.spec.name == spec.name) {
            return Err(CoreError::DuplicateName(spec.name));
        }
        let depth = parent.depth + 1;
        let id = parent_id.child(parent.children.len());
        let node = AgentNode {
            id: id.clone(),
            kind: decide_kind(depth, self.max_depth)?,
            depth,
            parent: Some(parent_id.clone()),
            children: Vec::new(),
            spec,
            memory: CodeMemory::default(),
        };
        self.nodes.insert(id.clone(), node);
        if let Some(parent) = self.nodes.get_mut(parent_id) {
            parent.children.push(id.clone());
        }
        Ok(id)
    }

    /// Makes `proposed.name` unique against the tree by appending the
    /// smallest free `_2`, `_3`, ... suffix, rewriting the signature, the
    /// validation tests, and call sites in `host_code` to match.
    pub fn resolve_name_collision(&self, proposed: FunctionSpec, host_code: &str) -> Result<NameResolution> {
        self.resolve_name_collision_with(proposed, host_code, &BTreeSet::new())
    }

    /// Like [`AgentTree::resolve_name_collision`], also avoiding `reserved`
    /// names (e.g. sibling subtasks not spawned yet).
    pub fn resolve_name_collision_with(
        &self,
        proposed: FunctionSpec,
        host_code: &str,
        reserved: &BTreeSet<String>,
    ) -> Result<NameResolution> {
        let taken = |name: &str| reserved.contains(name) || self.nodes.values().any(|n| n.spec.name == name);
        if !taken(&proposed.name) {
            return Ok(NameResolution {
                spec: proposed,
                host_code: host_code.to_string(),
                renamed_from: None,
                warnings: Vec::new(),
            });
        }
        let old = proposed.name.clone();
        let new = (2u32..)
            .map(|k| format!("{old}_{k}"))
            .find(|candidate| !taken(candidate))
            .expect("suffix space is unbounded");
        let source_err = |e: python::LexError| CoreError::InvalidSpec {
            name: old.clone(),
            reason: format!("cannot rewrite source: {e}"),
        };
        let (signature, _) = python::rename_identifier(&proposed.signature, &old, &new).map_err(source_err)?;
        let validation_tests = proposed
            .validation_tests
            .iter()
            .map(|t| python::rename_identifier(t, &old, &new).map(|(s, _)| s))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(source_err)?;
        let mut warnings = Vec::new();
        let host = match python::rename_identifier(host_code, &old, &new) {
            Ok((host, 0)) => {
                warnings.push(format!(
                    "renamed subtask `{old}` to `{new}` but the host code never references it"
                ));
                host
            }
            Ok((host, _)) => host,
            Err(e) => {
                warnings.push(format!(
                    "renamed subtask `{old}` to `{new}` but the host code does not tokenize: {e}"
                ));
                host_code.to_string()
            }
        };
        let spec = FunctionSpec {
            name: new,
            signature,
            docstring: proposed.docstring,
            validation_tests,
        };
        spec.validate()?;
        Ok(NameResolution {
            spec,
            host_code: host,
            renamed_from: Some(old),
            warnings,
        })
    }

    /// Resolves name collisions for a Mother's subtasks in order and spawns
    /// one agent per subtask.
    pub fn spawn_subtasks(
        &mut self,
        parent: &AgentId,
        host_code: &str,
        subtasks: Vec<FunctionSpec>,
    ) -> Result<SpawnedSubtasks> {
        let mut pending: BTreeSet<String> = subtasks.iter().map(|s| s.name.clone()).collect();
        let mut host = host_code.to_string();
        let mut ids = Vec::with_capacity(subtasks.len());
        let mut warnings = Vec::new();
        for spec in subtasks {
            pending.remove(&spec.name);
            let resolved = self.resolve_name_collision_with(spec, &host, &pending)?;
            host = resolved.host_code;
            warnings.extend(resolved.warnings);
            ids.push(self.spawn_agent(parent, resolved.spec)?);
        }
        Ok(SpawnedSubtasks {
            host_code: host,
            ids,
            warnings,
        })
    }

    /// Appends a code version to an agent's memory.
    pub fn append_version(&mut self, id: &AgentId, source: &str, iteration: u32) -> Result<()> {
        let node = self
            .nodes
            .get_mut(id)
            .ok_or_else(|| CoreError::UnknownAgent(id.clone()))?;
        node.memory
            .append(source, iteration)
            .map_err(|reason| CoreError::Memory { id: id.clone(), reason })
    }

    /// Depth-first pre-order (parent before children, siblings in order).
    pub fn preorder(&self) -> Vec<AgentId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root.clone()];
        while let Some(id) = stack.pop() {
            if let Some(node) = self.nodes.get(&id) {
                stack.extend(node.children.iter().rev().cloned());
            }
            out.push(id);
        }
        out
    }

    /// Depth-first post-order (children before parent, siblings in order).
    pub fn postorder(&self) -> Vec<AgentId> {
        fn visit(tree: &AgentTree, id: &AgentId, out: &mut Vec<AgentId>) {
            for child in &tree.nodes[id].children {
                visit(tree, child, out);
            }
            out.push(id.clone());
        }
        let mut out = Vec::with_capacity(self.nodes.len());
        visit(self, &self.root, &mut out);
        out
    }

    /// The subtree rooted at `from`, grouped by level (breadth-first).
    pub fn levels(&self, from: &AgentId) -> Result<Vec<Vec<AgentId>>> {
        self.node(from)?;
        let mut levels = Vec::new();
        let mut frontier = vec![from.clone()];
        while !frontier.is_empty() {
            let next: Vec<AgentId> = frontier
                .iter()
                .flat_map(|id| self.nodes[id].children.iter().cloned())
                .collect();
            levels.push(frontier);
            frontier = next;
        }
        Ok(levels)
    }

    /// Ids strictly below `id`.
    pub fn descendants(&self, id: &AgentId) -> Result<Vec<AgentId>> {
        let mut out = Vec::new();
        let mut queue: VecDeque<AgentId> = self.node(id)?.children.iter().cloned().collect();
        while let Some(next) = queue.pop_front() {
            queue.extend(self.nodes[&next].children.iter().cloned());
            out.push(next);
        }
        Ok(out)
    }

    /// Function names from the root down to `id`, joined by `/`.
    pub fn agent_path(&self, id: &AgentId) -> Result<String> {
        let mut names = Vec::new();
        let mut cursor = Some(id.clone());
        while let Some(cur) = cursor {
            let node = self.node(&cur)?;
            names.push(node.spec.name.clone());
            cursor = node.parent.clone();
        }
        names.reverse();
        Ok(names.join("/"))
    }

    /// Concatenates every agent's latest code, leaves first and the root
    /// last, separated by one blank line. The preamble, when present, comes
    /// first.
    pub fn assemble_codebase(&self) -> Result<String> {
        let mut pieces: Vec<&str> = Vec::with_capacity(self.nodes.len() + 1);
        if !self.preamble.is_empty() {
            pieces.push(&self.preamble);
        }
        let mut defined = BTreeSet::new();
        for id in self.postorder() {
            let node = &self.nodes[&id];
            let source = node.latest_source().ok_or_else(|| CoreError::EmptyMemory {
                id: id.clone(),
                name: node.spec.name.clone(),
            })?;
            if let Ok(statements) = python::top_level_statements(source) {
                for name in statements
                    .into_iter()
                    .filter(|s| matches!(s.kind, StatementKind::Def | StatementKind::Class))
                    .filter_map(|s| s.name)
                {
                    if !defined.insert(name.clone()) {
                        return Err(CoreError::DuplicateDefinition(name));
                    }
                }
            }
            pieces.push(source);
        }
        Ok(pieces.join("\n\n"))
    }

    /// Checks every structural invariant of the hierarchy.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(CoreError::Invariant(msg));
        let Some(root) = self.nodes.get(&self.root) else {
            return fail(format!("root {} missing", self.root));
        };
        if root.parent.is_some() || root.depth != 1 {
            return fail("root must have depth 1 and no parent".into());
        }
        let mut names = BTreeSet::new();
        for node in self.nodes.values() {
            if (node.depth == 1) != node.parent.is_none() {
                return fail(format!("{}: depth 1 iff no parent", node.id));
            }
            if node.kind == AgentKind::Child && !node.children.is_empty() {
                return fail(format!("{}: Child with children", node.id));
            }
            if (node.kind == AgentKind::Child) != (node.depth == self.max_depth) {
                return fail(format!(
                    "{}: kind {} at depth {} with max depth {}",
                    node.id, node.kind, node.depth, self.max_depth
                ));
            }
            if !names.insert(node.spec.name.as_str()) {
                return fail(format!("duplicate function name {}", node.spec.name));
            }
            if let Some(parent_id) = &node.parent {
                let Some(parent) = self.nodes.get(parent_id) else {
                    return fail(format!("{}: parent {parent_id} missing", node.id));
                };
                if !parent.children.contains(&node.id) {
                    return fail(format!("{}: not listed by parent", node.id));
                }
                if node.depth != parent.depth + 1 {
                    return fail(format!("{}: depth does not follow parent", node.id));
                }
            }
            for child in &node.children {
                match self.nodes.get(child) {
                    Some(c) if c.parent.as_ref() == Some(&node.id) => {}
                    _ => return fail(format!("{}: child {child} inconsistent", node.id)),
                }
            }
            if let Err(reason) = node.memory.check() {
                return fail(format!("{}: {reason}", node.id));
            }
        }
        // Reachability from the root rules out cycles and orphans.
        if self.preorder().len() != self.nodes.len() {
            return fail("nodes unreachable from the root".into());
        }
        Ok(())
    }

    /// Serializes to the `tree.json` format (nodes in pre-order).
    pub fn to_json(&self) -> String {
        let file = TreeFile {
            root: self.root.clone(),
            max_depth: self.max_depth,
            preamble: self.preamble.clone(),
            nodes: self.preorder().into_iter().map(|id| self.nodes[&id].clone()).collect(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("tree serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TreeFile = serde_json::from_str(text).map_err(|e| CoreError::Serialization(e.to_string()))?;
        let tree = Self {
            root: file.root,
            max_depth: file.max_depth,
            preamble: file.preamble,
            nodes: file.nodes.into_iter().map(|n| (n.id.clone(), n)).collect(),
        };
        tree.check_invariants()?;
        Ok(tree)
    }
}
