use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use soa_core::{AgentId, AgentTree, FunctionSpec, TestStatus};
use soa_sandbox::{evaluate_agent_in_context, ProcessSandbox, Sandbox, SandboxError, ScriptedSandbox, RUNNER_SHIM};

fn python() -> String {
    std::env::var("SOA_PYTHON").unwrap_or_else(|_| "python3".into())
}

fn sandbox() -> ProcessSandbox {
    ProcessSandbox::new(python(), None).expect("python interpreter available")
}

fn tests(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

const SECOND: Duration = Duration::from_secs(1);

#[test]
fn passing_test() {
    let report = sandbox()
        .evaluate("def f():\n    return 1", &tests(&["assert f() == 1"]), SECOND)
        .unwrap();
    assert!(report.all_passed);
    assert_eq!(report.results[0].status, TestStatus::Pass);
    assert_eq!(report.results[0].test_source, "assert f() == 1");
}

#[test]
fn failing_test_carries_assertion_message() {
    let report = sandbox()
        .evaluate("def f():\n    return 1", &tests(&["assert f() == 2"]), SECOND)
        .unwrap();
    assert!(!report.all_passed);
    assert_eq!(report.results[0].status, TestStatus::Fail);
    assert!(report.results[0].message.contains("AssertionError"));
    assert!(report.results[0].message.contains("evaluated to 1"));
}

#[test]
fn infinite_loop_times_out_within_grace() {
    let started = Instant::now();
    let report = sandbox()
        .evaluate(
            "def spin():\n    while True:\n        pass",
            &tests(&["spin()", "assert True"]),
            SECOND,
        )
        .unwrap();
    let elapsed = started.elapsed();
    assert_eq!(report.results[0].status, TestStatus::Timeout);
    assert_eq!(report.results[1].status, TestStatus::Pass);
    assert!(elapsed < Duration::from_millis(1900), "took {elapsed:?}");
}

#[test]
fn load_failure_marks_every_test_error() {
    let report = sandbox()
        .evaluate("1/0", &tests(&["assert f() == 1", "assert g() == 2"]), SECOND)
        .unwrap();
    assert_eq!(report.results.len(), 2);
    for r in &report.results {
        assert_eq!(r.status, TestStatus::Error);
        assert!(r.message.contains("ZeroDivisionError"), "{}", r.message);
    }
}

#[test]
fn other_exceptions_are_errors() {
    let report = sandbox()
        .evaluate("def f():\n    return {}['k']", &tests(&["assert f() == 1"]), SECOND)
        .unwrap();
    assert_eq!(report.results[0].status, TestStatus::Error);
    assert!(report.results[0].message.starts_with("KeyError"));
}

#[test]
fn printing_code_does_not_corrupt_protocol() {
    let report = sandbox()
        .evaluate(
            "print('noise')\ndef f():\n    print('more')\n    return 1",
            &tests(&["assert f() == 1"]),
            SECOND,
        )
        .unwrap();
    assert!(report.all_passed);
}

#[test]
fn evaluations_are_isolated() {
    let sb = sandbox();
    let code = "STATE = []\ndef push():\n    STATE.append(1)\n    return len(STATE)";
    let t = tests(&["assert push() == 1"]);
    let first = sb.evaluate(code, &t, SECOND).unwrap();
    let second = sb.evaluate(code, &t, SECOND).unwrap();
    assert!(first.all_passed && second.all_passed);
    assert_eq!(first.codebase_digest, second.codebase_digest);
    let strip = |r: &soa_core::TestReport| {
        r.results
            .iter()
            .map(|x| (x.status, x.message.clone()))
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&first), strip(&second));
    // Definitions made by one call never leak into the next.
    let leak = sb
        .evaluate("x = 1", &tests(&["assert 'push' not in globals()"]), SECOND)
        .unwrap();
    assert!(leak.all_passed);
}

#[test]
fn test_blocks_get_separate_namespaces() {
    let report = sandbox()
        .evaluate(
            "def f():\n    return 1",
            &tests(&["helper = 5\nassert f() + helper == 6", "assert 'helper' not in dir()"]),
            SECOND,
        )
        .unwrap();
    assert!(report.all_passed, "{:?}", report.results);
}

#[test]
fn empty_tests_are_rejected() {
    assert!(matches!(
        sandbox().evaluate("x = 1", &[], SECOND),
        Err(SandboxError::NoTests(_))
    ));
}

#[test]
fn missing_interpreter_is_environment_error() {
    let err = ProcessSandbox::new("/nonexistent/python-for-soa", None).unwrap_err();
    assert!(matches!(err, SandboxError::Environment(_)));
    let err = ProcessSandbox::new(python(), Some(PathBuf::from("/nonexistent/shim.py"))).unwrap_err();
    assert!(matches!(err, SandboxError::Environment(_)));
}

fn stub_shim(body: &str) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stub_shim.py");
    std::fs::write(&path, body).unwrap();
    (dir, path)
}

#[test]
fn hard_backstop_kills_unresponsive_runner() {
    let (_dir, path) = stub_shim("import time\ntime.sleep(30)\n");
    let sb = ProcessSandbox::new(python(), Some(path)).unwrap();
    let timeout = Duration::from_millis(300);
    let started = Instant::now();
    let report = sb.evaluate("x = 1", &tests(&["assert x == 1"]), timeout).unwrap();
    let elapsed = started.elapsed();
    assert!(elapsed < timeout * 2 + Duration::from_millis(500), "took {elapsed:?}");
    assert_eq!(report.results[0].status, TestStatus::Timeout);
}

#[test]
fn malformed_runner_output_becomes_error_results() {
    let (_dir, path) =
        stub_shim("import sys\nsys.stdin.read()\nprint('not json')\nsys.stderr.write('stub exploded')\n");
    let sb = ProcessSandbox::new(python(), Some(path)).unwrap();
    let report = sb
        .evaluate("x = 1", &tests(&["assert x == 1", "assert x"]), SECOND)
        .unwrap();
    assert_eq!(report.results.len(), 2);
    for r in &report.results {
        assert_eq!(r.status, TestStatus::Error);
        assert!(r.message.contains("stub exploded"));
    }
}

#[test]
fn stub_runner_speaking_protocol_is_accepted() {
    let (_dir, path) = stub_shim(
        "import json, sys\nreq = json.load(sys.stdin)\nprint(json.dumps({'results': [{'status': 'pass', 'message': '', 'duration_ms': 0} for _ in req['tests']], 'all_passed': True}))\n",
    );
    let sb = ProcessSandbox::new(python(), Some(path)).unwrap();
    let report = sb.evaluate("garbage(", &tests(&["a", "b"]), SECOND).unwrap();
    assert!(report.all_passed);
}

fn odds_tree(sibling_code: &str) -> AgentTree {
    let spec = |name: &str, sig: &str, tests: &[&str]| {
        FunctionSpec::new(
            name,
            sig,
            format!("{name} doc"),
            tests.iter().map(|t| t.to_string()).collect(),
        )
        .unwrap()
    };
    let mut tree = AgentTree::new(
        spec(
            "is_sum_of_odds_ten",
            "def is_sum_of_odds_ten(numbers: list) -> bool:",
            &["assert is_sum_of_odds_ten([1, 2, 9]) == True"],
        ),
        2,
    )
    .unwrap();
    let root = AgentId::root();
    tree.append_version(
        &root,
        "def is_sum_of_odds_ten(numbers: list) -> bool:\n    odd_numbers = get_odd_numbers(numbers)\n    return sum_of_numbers(odd_numbers) == 10",
        0,
    )
    .unwrap();
    let odd = tree
        .spawn_agent(
            &root,
            spec(
                "get_odd_numbers",
                "def get_odd_numbers(numbers: list) -> list:",
                &["assert get_odd_numbers([1, 2, 3, 4, 5]) == [1, 3, 5]"],
            ),
        )
        .unwrap();
    let sum = tree
        .spawn_agent(
            &root,
            spec("sum_of_numbers", "def sum_of_numbers(numbers: list) -> int:", &[]),
        )
        .unwrap();
    tree.append_version(
        &odd,
        "def get_odd_numbers(numbers: list) -> list:\n    return [n for n in numbers if n % 2 == 1]",
        0,
    )
    .unwrap();
    tree.append_version(&sum, sibling_code, 0).unwrap();
    tree
}

#[test]
fn child_evaluated_against_full_assembly() {
    let tree = odds_tree("def sum_of_numbers(numbers: list) -> int:\n    return sum(numbers)");
    let report = evaluate_agent_in_context(&tree, &"0.0".into(), &sandbox(), SECOND).unwrap();
    assert!(report.all_passed, "{:?}", report.results);
    let root_report = evaluate_agent_in_context(&tree, &AgentId::root(), &sandbox(), SECOND).unwrap();
    assert!(root_report.all_passed);
}

#[test]
fn agent_without_tests_is_contract_error() {
    let tree = odds_tree("def sum_of_numbers(numbers: list) -> int:\n    return sum(numbers)");
    let err = evaluate_agent_in_context(&tree, &"0.1".into(), &sandbox(), SECOND).unwrap_err();
    assert!(matches!(err, SandboxError::NoTests(_)));
}

#[test]
fn broken_sibling_fails_every_test_at_load() {
    let tree = odds_tree("def sum_of_numbers(numbers: list) -> int:\n    return sum(numbers\n");
    let report = evaluate_agent_in_context(&tree, &"0.0".into(), &sandbox(), SECOND).unwrap();
    assert_eq!(report.results[0].status, TestStatus::Error);
    assert!(report.results[0].message.contains("SyntaxError"));
}

// Runner protocol conformance, driving the shim directly.

fn run_shim(input: &str) -> (Option<i32>, String, Duration) {
    let started = Instant::now();
    let mut child = Command::new(python())
        .args(["-c", RUNNER_SHIM])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code(),
        String::from_utf8(out.stdout).unwrap(),
        started.elapsed(),
    )
}

#[test]
fn shim_golden_pass_and_fail() {
    let (code, out, _) = run_shim(
        r#"{"code": "def f():\n    return 1", "tests": ["assert f() == 1", "assert f() == 0"], "timeout_s": 5}"#,
    );
    assert_eq!(code, Some(0));
    assert!(out.ends_with('\n'));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"][0]["status"], "pass");
    assert_eq!(v["results"][1]["status"], "fail");
    assert_eq!(v["all_passed"], false);
}

#[test]
fn shim_per_test_timeout() {
    let (code, out, elapsed) = run_shim(r#"{"code": "import time", "tests": ["time.sleep(5)"], "timeout_s": 1}"#);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["results"][0]["status"], "timeout");
    assert!(elapsed < Duration::from_secs(2), "took {elapsed:?}");
}

#[test]
fn shim_malformed_request_exits_3() {
    for bad in [
        "{bad",
        r#"{"code": 1, "tests": [], "timeout_s": 1}"#,
        r#"{"code": "", "tests": []}"#,
    ] {
        let (code, out, _) = run_shim(bad);
        assert_eq!(code, Some(3), "{bad}");
        assert!(out.is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn report_order_and_all_passed_consistent(statuses in proptest::collection::vec(0u8..4, 1..12)) {
        let to_status = |b: u8| match b {
            0 => TestStatus::Pass,
            1 => TestStatus::Fail,
            2 => TestStatus::Error,
            _ => TestStatus::Timeout,
        };
        let tests: Vec<String> = (0..statuses.len()).map(|i| format!("test_{i}")).collect();
        let lookup = statuses.clone();
        let sb = ScriptedSandbox::new(move |_, t| {
            let i: usize = t.trim_start_matches("test_").parse().unwrap();
            to_status(lookup[i])
        });
        let report = sb.evaluate("code", &tests, SECOND).unwrap();
        let got: Vec<_> = report.results.iter().map(|r| r.test_source.clone()).collect();
        prop_assert_eq!(got, tests);
        prop_assert_eq!(report.all_passed, statuses.iter().all(|s| *s == 0));
    }
}
