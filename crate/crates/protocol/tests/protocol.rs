use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use proptest::prelude::*;
use soa_core::{AgentId, AgentKind, AgentTree, FunctionSpec, RunConfig, TestReport, TestStatus};
use soa_llm::{LlmClient, MockBackend, PromptPack, TraceSink};
use soa_protocol::synthetic::synthetic_case;
use soa_protocol::{Event, EventKind, ProtocolError, SolveStatus, Solver};
use soa_sandbox::{ProcessSandbox, Sandbox, ScriptedSandbox};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/is_sum_of_odds_ten")
        .join(name)
}

fn odds_spec() -> FunctionSpec {
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(fixture("spec.json")).unwrap()).unwrap();
    let tests = v["tests"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.as_str().unwrap().to_string())
        .collect();
    FunctionSpec::new(
        v["name"].as_str().unwrap(),
        v["signature"].as_str().unwrap(),
        v["docstring"].as_str().unwrap(),
        tests,
    )
    .unwrap()
}

fn odds_fixtures() -> BTreeMap<String, String> {
    serde_json::from_str(&std::fs::read_to_string(fixture("mock.json")).unwrap()).unwrap()
}

fn client(fixtures: BTreeMap<String, String>) -> LlmClient {
    LlmClient::new(
        Arc::new(MockBackend::new(fixtures)),
        PromptPack::builtin(),
        Arc::new(TraceSink::in_memory()),
        "mock",
        0.0,
        4,
    )
}

fn config(max_iterations: u32) -> RunConfig {
    RunConfig {
        max_iterations,
        ..RunConfig::default()
    }
}

fn python() -> ProcessSandbox {
    ProcessSandbox::new(std::env::var("SOA_PYTHON").unwrap_or_else(|_| "python3".into()), None).unwrap()
}

#[test]
fn odds_generation_builds_mother_and_two_children() {
    let llm = client(odds_fixtures());
    let sandbox = ScriptedSandbox::all_pass();
    let solver = Solver::new(&llm, &sandbox, config(8)).unwrap();
    let mut tree = AgentTree::new(odds_spec(), 2).unwrap();
    solver.generate_subtree(&mut tree, &AgentId::root()).unwrap();
    assert_eq!(tree.len(), 3);
    assert_eq!(tree.root_node().kind, AgentKind::Mother);
    let names: Vec<_> = tree
        .root_node()
        .children
        .iter()
        .map(|c| tree.node(c).unwrap().spec.name.clone())
        .collect();
    assert_eq!(names, ["get_odd_numbers", "sum_of_numbers"]);
    for id in tree.preorder() {
        let node = tree.node(&id).unwrap();
        assert_eq!(node.memory.versions().len(), 1);
        if id != AgentId::root() {
            assert_eq!(node.kind, AgentKind::Child);
            assert!(node.children.is_empty());
        }
    }
}

#[test]
fn odds_solve_passes_before_modification() {
    let llm = client(odds_fixtures());
    let sandbox = python();
    let solver = Solver::new(&llm, &sandbox, config(8)).unwrap();
    let result = solver.solve(odds_spec()).unwrap();
    assert_eq!(result.status, SolveStatus::Passed);
    assert_eq!(result.iterations_used, 0);
    assert_eq!(result.per_iteration_reports.len(), 1);
    // Leaves first, root last.
    let odd = result.final_code.find("def get_odd_numbers").unwrap();
    let sum = result.final_code.find("def sum_of_numbers").unwrap();
    let root = result.final_code.find("def is_sum_of_odds_ten").unwrap();
    assert!(odd < sum && sum < root);
    let hidden = vec![
        "assert is_sum_of_odds_ten([1, 3, 5, 1]) == True".to_string(),
        "assert is_sum_of_odds_ten([2, 4]) == False".to_string(),
    ];
    let report = sandbox
        .evaluate(&result.final_code, &hidden, std::time::Duration::from_secs(10))
        .unwrap();
    assert!(report.all_passed, "{:?}", report.results);
    // Validation tests, skeleton, two bodies; no revision calls.
    assert_eq!(llm.trace().len(), 3);
}

#[test]
fn unparseable_skeleton_twice_names_root() {
    let mut fixtures = odds_fixtures();
    fixtures.insert("skeleton:is_sum_of_odds_ten".into(), "I cannot help with that.".into());
    let llm = client(fixtures);
    let sandbox = ScriptedSandbox::all_pass();
    let solver = Solver::new(&llm, &sandbox, config(8)).unwrap();
    match solver.solve(odds_spec()) {
        Err(ProtocolError::Generation { agent_path, .. }) => assert_eq!(agent_path, "is_sum_of_odds_ten"),
        other => panic!("{other:?}"),
    }
    assert_eq!(llm.trace().len(), 2);
}

#[test]
fn unfixed_bug_exhausts_budget() {
    let llm = client(odds_fixtures());
    let sandbox = ScriptedSandbox::all_fail();
    let solver = Solver::new(&llm, &sandbox, config(2)).unwrap();
    let result = solver.solve(odds_spec()).unwrap();
    assert_eq!(result.status, SolveStatus::Exhausted);
    assert_eq!(result.iterations_used, 2);
    assert_eq!(result.per_iteration_reports.len(), 3);
    for id in result.tree.preorder() {
        let iterations: Vec<u32> = result
            .tree
            .node(&id)
            .unwrap()
            .memory
            .versions()
            .iter()
            .map(|v| v.iteration)
            .collect();
        assert_eq!(iterations, vec![0, 1, 2]);
    }
}

#[test]
fn zero_iterations_evaluates_once() {
    let llm = client(odds_fixtures());
    let sandbox = ScriptedSandbox::all_fail();
    let solver = Solver::new(&llm, &sandbox, config(0)).unwrap();
    let result = solver.solve(odds_spec()).unwrap();
    assert_eq!(result.iterations_used, 0);
    assert_eq!(result.per_iteration_reports.len(), 1);
    assert_eq!(sandbox.calls().len(), 1);
}

#[test]
fn early_stop_can_be_disabled() {
    let llm = client(odds_fixtures());
    let sandbox = ScriptedSandbox::all_pass();
    let cfg = RunConfig {
        early_stop_on_pass: false,
        ..config(2)
    };
    let result = Solver::new(&llm, &sandbox, cfg).unwrap().solve(odds_spec()).unwrap();
    assert_eq!(result.status, SolveStatus::Passed);
    assert_eq!(result.iterations_used, 2);
}

#[test]
fn spec_without_tests_is_contract_error() {
    let llm = client(odds_fixtures());
    let sandbox = ScriptedSandbox::all_pass();
    let mut spec = odds_spec();
    spec.validation_tests.clear();
    assert!(matches!(
        Solver::new(&llm, &sandbox, config(1)).unwrap().solve(spec),
        Err(ProtocolError::Contract(_))
    ));
}

fn generated_odds_tree(llm: &LlmClient) -> AgentTree {
    let sandbox = ScriptedSandbox::all_pass();
    let solver = Solver::new(llm, &sandbox, config(1)).unwrap();
    let mut tree = AgentTree::new(odds_spec(), 2).unwrap();
    solver.generate_subtree(&mut tree, &AgentId::root()).unwrap();
    tree
}

fn failing_report() -> TestReport {
    TestReport::new(
        vec![soa_core::TestResult {
            test_source: "assert is_sum_of_odds_ten([1, 2, 9]) == True".into(),
            status: TestStatus::Fail,
            message: "AssertionError".into(),
            duration_ms: 0.0,
        }],
        "x",
    )
}

#[test]
fn root_revision_propagates_observation_to_children() {
    let llm = client(odds_fixtures());
    let mut tree = generated_odds_tree(&llm);
    let sandbox = ScriptedSandbox::all_pass();
    let solver = Solver::new(&llm, &sandbox, config(1)).unwrap();
    solver
        .modify_subtree(&mut tree, &AgentId::root(), &failing_report(), None, 1)
        .unwrap();
    for id in tree.preorder() {
        assert_eq!(tree.node(&id).unwrap().memory.versions().len(), 2);
    }
    let revisions: Vec<_> = llm
        .trace()
        .records()
        .into_iter()
        .filter(|r| r.template == soa_llm::Template::CritiqueAndRevise)
        .collect();
    assert_eq!(revisions.len(), 3);
    assert!(revisions[0].prompt.contains("No observation from a parent agent."));
    for child in &revisions[1..] {
        assert!(child.prompt.contains("Your parent function was revised."));
        assert!(child.prompt.contains("The host logic is correct"));
        // Passing child tests do not stop the revision.
        assert!(child.prompt.contains("tests passed."));
    }
    // Children were evaluated against the full assembly.
    for (code, _) in sandbox.calls() {
        assert!(code.contains("def is_sum_of_odds_ten"));
    }
}

#[test]
fn single_child_subtree_revises_once() {
    let llm = client(odds_fixtures());
    let mut tree = generated_odds_tree(&llm);
    let sandbox = ScriptedSandbox::all_pass();
    let solver = Solver::new(&llm, &sandbox, config(1)).unwrap();
    let child = AgentId::root().child(0);
    solver
        .modify_subtree(&mut tree, &child, &failing_report(), None, 1)
        .unwrap();
    assert_eq!(tree.node(&child).unwrap().memory.versions().len(), 2);
    assert_eq!(tree.root_node().memory.versions().len(), 1);
    assert!(sandbox.calls().is_empty());
}

#[test]
fn failed_revision_is_skipped_with_warning() {
    let mut fixtures = odds_fixtures();
    fixtures.remove("critique_and_revise:is_sum_of_odds_ten/sum_of_numbers");
    let llm = client(fixtures);
    let sandbox = ScriptedSandbox::all_fail();
    let result = Solver::new(&llm, &sandbox, config(1))
        .unwrap()
        .solve(odds_spec())
        .unwrap();
    let sum = result.tree.node(&AgentId::root().child(1)).unwrap();
    assert_eq!(sum.memory.versions().len(), 1);
    assert_eq!(result.tree.root_node().memory.versions().len(), 2);
    assert!(result
        .warnings
        .iter()
        .any(|w| w.contains("sum_of_numbers") && w.contains("skipped")));
}

#[test]
fn single_agent_passes_immediately() {
    let fixtures = BTreeMap::from([(
        "child_body:is_sum_of_odds_ten".to_string(),
        "```python\ndef is_sum_of_odds_ten(numbers: list) -> bool:\n    return sum(n for n in numbers if n % 2 == 1) == 10\n```".to_string(),
    )]);
    let llm = client(fixtures);
    let sandbox = python();
    let result = soa_protocol::single_agent_solve(odds_spec(), &config(3), &llm, &sandbox).unwrap();
    assert_eq!(result.status, SolveStatus::Passed);
    assert_eq!(result.iterations_used, 0);
    assert_eq!(result.tree.len(), 1);
    assert_eq!(result.tree.root_node().kind, AgentKind::Child);
}

#[test]
fn single_agent_fixes_bug_in_one_round() {
    let fixtures = BTreeMap::from([
        (
            "child_body:is_sum_of_odds_ten".to_string(),
            "```python\ndef is_sum_of_odds_ten(numbers: list) -> bool:\n    return sum(numbers) == 10\n```".to_string(),
        ),
        (
            "critique_and_revise:is_sum_of_odds_ten".to_string(),
            "FEEDBACK: Even numbers must be skipped.\n```python\ndef is_sum_of_odds_ten(numbers: list) -> bool:\n    return sum(n for n in numbers if n % 2) == 10\n```".to_string(),
        ),
    ]);
    let llm = client(fixtures);
    let sandbox = python();
    let result = soa_protocol::single_agent_solve(odds_spec(), &config(3), &llm, &sandbox).unwrap();
    assert_eq!(result.status, SolveStatus::Passed);
    assert_eq!(result.iterations_used, 1);
    assert!(!result.per_iteration_reports[0].all_passed);
    let revision = llm
        .trace()
        .records()
        .into_iter()
        .find(|r| r.template == soa_llm::Template::CritiqueAndRevise)
        .unwrap();
    assert!(revision.prompt.contains("No observation from a parent agent."));
}

#[test]
fn generation_is_deterministic_across_concurrency() {
    let case = synthetic_case(3, false, |_| 3);
    let trees: Vec<String> = [1, 2, 8]
        .into_iter()
        .map(|c| {
            let llm = client(case.fixtures.clone());
            let sandbox = ScriptedSandbox::all_fail();
            let cfg = RunConfig {
                concurrency_limit: c,
                max_depth: 3,
                ..config(2)
            };
            Solver::new(&llm, &sandbox, cfg)
                .unwrap()
                .solve(case.spec.clone())
                .unwrap()
                .tree
                .to_json()
        })
        .collect();
    assert_eq!(trees[0], trees[1]);
    assert_eq!(trees[0], trees[2]);
}

#[test]
fn fanout_and_subtask_tests_are_capped() {
    let case = synthetic_case(2, false, |_| 5);
    let llm = client(case.fixtures.clone());
    let sandbox = ScriptedSandbox::all_pass();
    let cfg = RunConfig {
        max_fanout: 3,
        ..config(0)
    };
    let result = Solver::new(&llm, &sandbox, cfg).unwrap().solve(case.spec).unwrap();
    assert_eq!(result.tree.root_node().children.len(), 3);
    assert!(result.warnings.iter().any(|w| w.contains("dropped")));
}

/// Checks the per-iteration ordering and cardinality rules of the event log.
fn check_propagation(events: &[Event], tree: &AgentTree) -> Result<(), String> {
    let is_desc = |a: &str, d: &str| d.starts_with(&format!("{a}."));
    let max_iter = events.iter().map(|e| e.iteration).max().unwrap_or(0);
    for it in 1..=max_iter {
        let evs: Vec<(usize, &Event)> = events.iter().enumerate().filter(|(_, e)| e.iteration == it).collect();
        let mut revised = BTreeMap::new();
        for (i, e) in &evs {
            if e.event == EventKind::Revise && revised.insert(e.agent_id.as_str(), *i).is_some() {
                return Err(format!("{} revised twice in iteration {it}", e.agent_id));
            }
        }
        if !revised.contains_key("0") {
            return Err(format!("root not revised in iteration {it}"));
        }
        for (node, at) in &revised {
            for (i, e) in &evs {
                let touches = matches!(e.event, EventKind::Revise | EventKind::Evaluate);
                if touches && is_desc(node, e.agent_id.as_str()) && i < at {
                    return Err(format!("{} acted before ancestor {node} revised", e.agent_id));
                }
            }
        }
        if revised.len() != tree.len() {
            return Err(format!(
                "{} of {} agents revised in iteration {it}",
                revised.len(),
                tree.len()
            ));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn propagation_order_holds(depth in 2u32..5, seed in proptest::collection::vec(0usize..4, 64), conc in 1usize..6) {
        let mut i = 0;
        let case = synthetic_case(depth, false, |_| { i += 1; seed[i % seed.len()].min(3) });
        let llm = client(case.fixtures.clone());
        let sandbox = ScriptedSandbox::all_fail();
        let cfg = RunConfig { concurrency_limit: conc, max_depth: depth, ..config(2) };
        let solver = Solver::new(&llm, &sandbox, cfg).unwrap();
        let result = solver.solve(case.spec.clone()).unwrap();
        prop_assert_eq!(result.tree.len(), case.expected.len());
        let events = solver.events().events();
        prop_assert_eq!(check_propagation(&events, &result.tree), Ok(()));
    }
}
