//! Synthetic problems with a known decomposition, scripted for the mock
//! backend. Every function maps an int to an int: leaves add a constant,
//! Mothers sum their subtasks. All names are four characters wide.

use std::collections::BTreeMap;

use soa_core::{decide_kind, AgentKind, FunctionSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedNode {
    pub path: String,
    pub depth: u32,
    pub kind: AgentKind,
    pub children: usize,
}

#[derive(Debug, Clone)]
pub struct SyntheticCase {
    pub spec: FunctionSpec,
    /// Mock fixtures keyed `"{template}:{agent_path}"`.
    pub fixtures: BTreeMap<String, String>,
    /// Expected tree in pre-order.
    pub expected: Vec<ExpectedNode>,
}

struct Node {
    name: String,
    depth: u32,
    constant: u64,
    children: Vec<Node>,
}

impl Node {
    fn value(&self, x: u64) -> u64 {
        if self.children.is_empty() {
            x + self.constant
        } else {
            self.children.iter().map(|c| c.value(x)).sum()
        }
    }

    fn code(&self) -> String {
        let expr = if self.children.is_empty() {
            format!("x + {}", self.constant)
        } else {
            self.children
                .iter()
                .map(|c| format!("{}(x)", c.name))
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("def {}(x):\n    return {expr}", self.name)
    }

    fn test(&self) -> String {
        format!("assert {}(1) == {}", self.name, self.value(1))
    }
}

/// Builds a case whose generated tree has `fanout(depth)` subtasks under
/// each Mother at `depth`. With `uniform_volume`, leaf constants are padded
/// so a leaf's code is exactly as long as a two-subtask Mother's.
pub fn synthetic_case(max_depth: u32, uniform_volume: bool, mut fanout: impl FnMut(u32) -> usize) -> SyntheticCase {
    let mut counter = 0u64;
    let root = build(1, max_depth, uniform_volume, &mut counter, &mut fanout);
    let spec = FunctionSpec::new(
        &root.name,
        format!("def {}(x):", root.name),
        "Return the combined value of this node.",
        vec![root.test()],
    )
    .expect("synthetic root spec is valid");
    let mut fixtures = BTreeMap::new();
    let mut expected = Vec::new();
    script(&root, "", max_depth, &mut fixtures, &mut expected);
    SyntheticCase {
        spec,
        fixtures,
        expected,
    }
}

fn build(depth: u32, max_depth: u32, uniform: bool, counter: &mut u64, fanout: &mut impl FnMut(u32) -> usize) -> Node {
    let index = *counter;
    *counter += 1;
    assert!(index < 10_000, "synthetic trees are limited to 10000 nodes");
    let n = match decide_kind(depth, max_depth).expect("depth within range") {
        AgentKind::Mother => fanout(depth),
        AgentKind::Child => 0,
    };
    let children = (0..n)
        .map(|_| build(depth + 1, max_depth, uniform, counter, fanout))
        .collect();
    Node {
        name: format!("n{index:03}"),
        depth,
        constant: if uniform { 1_000_000_000_000 + index } else { index + 1 },
        children,
    }
}

fn script(
    node: &Node,
    parent_path: &str,
    max_depth: u32,
    fixtures: &mut BTreeMap<String, String>,
    expected: &mut Vec<ExpectedNode>,
) {
    let path = if parent_path.is_empty() {
        node.name.clone()
    } else {
        format!("{parent_path}/{}", node.name)
    };
    let kind = decide_kind(node.depth, max_depth).expect("depth within range");
    let code = node.code();
    match kind {
        AgentKind::Mother => {
            let mut text = format!("Plan for {}.\n\n```host\n{code}\n```\n", node.name);
            for c in &node.children {
                text.push_str(&format!(
                    "\n```subtask\ndef {}(x):\n    \"\"\"Return the value of node {}.\"\"\"\n\n{}\n```\n",
                    c.name,
                    c.name,
                    c.test()
                ));
            }
            fixtures.insert(format!("skeleton:{path}"), text);
        }
        AgentKind::Child => {
            fixtures.insert(format!("child_body:{path}"), format!("```python\n{code}\n```"));
        }
    }
    fixtures.insert(
        format!("critique_and_revise:{path}"),
        format!(
            "FEEDBACK: {} looks consistent with its tests.\n```python\n{code}\n```",
            node.name
        ),
    );
    expected.push(ExpectedNode {
        path: path.clone(),
        depth: node.depth,
        kind,
        children: node.children.len(),
    });
    for c in &node.children {
        script(c, &path, max_depth, fixtures, expected);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_depth_two() {
        let case = synthetic_case(2, true, |_| 2);
        assert_eq!(case.expected.len(), 3);
        assert_eq!(case.expected[0].kind, AgentKind::Mother);
        assert_eq!(case.expected[1].path, "n000/n001");
        let host = "def n000(x):\n    return n001(x) + n002(x)";
        let leaf = "def n001(x):\n    return x + 1000000000001";
        assert_eq!(host.len(), leaf.len());
        assert!(case.fixtures["skeleton:n000"].contains(host));
        assert!(case.fixtures["child_body:n000/n001"].contains(leaf));
        assert_eq!(case.spec.validation_tests, vec!["assert n000(1) == 2000000000005"]);
    }
}
