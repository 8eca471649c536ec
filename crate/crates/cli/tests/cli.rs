use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use soa_cli::{create_run_dir, replay_run, CliError, RunManifest};

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    repo()
        .join("fixtures/is_sum_of_odds_ten")
        .join(name)
        .display()
        .to_string()
}

fn soa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soa"))
        .args(args)
        .env_remove("SOA_API_KEY")
        .output()
        .unwrap()
}

fn mock_backend() -> String {
    format!("mock:{}", fixture("mock.json"))
}

fn only_run_dir(out: &Path) -> PathBuf {
    let dirs: Vec<PathBuf> = std::fs::read_dir(out).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(dirs.len(), 1, "{dirs:?}");
    dirs.into_iter().next().unwrap()
}

fn solve(out: &Path, spec: &str, extra: &[&str]) -> Output {
    let backend = mock_backend();
    let mut args = vec![
        "solve",
        "--spec",
        spec,
        "--backend",
        &backend,
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    soa(&args)
}

#[test]
fn solve_writes_self_describing_run_dir() {
    let out = tempfile::tempdir().unwrap();
    let o = solve(out.path(), &fixture("spec.json"), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let run = only_run_dir(out.path());
    for f in [
        "manifest.json",
        "spec.json",
        "trace.jsonl",
        "events.jsonl",
        "tree.json",
        "final_code.py",
        "report.json",
        "run.log",
    ] {
        assert!(run.join(f).is_file(), "missing {f}");
    }
    let m = RunManifest::read(&run).unwrap();
    assert!(m.finished_at.is_some());
    assert_eq!(m.outcome.unwrap().status, "passed");
    assert_eq!(m.prompt_pack_digest.len(), 64);
    let trace = std::fs::read_to_string(run.join("trace.jsonl")).unwrap();
    assert_eq!(trace.lines().count(), 3);
}

#[test]
fn spec_without_tests_gets_drafted_tests() {
    let out = tempfile::tempdir().unwrap();
    let mut spec: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("spec.json")).unwrap()).unwrap();
    spec.as_object_mut().unwrap().remove("tests");
    let spec_path = out.path().join("spec-no-tests.json");
    std::fs::write(&spec_path, spec.to_string()).unwrap();
    let runs = out.path().join("runs");
    let o = solve(&runs, spec_path.to_str().unwrap(), &["--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let run = only_run_dir(&runs);
    let trace = std::fs::read_to_string(run.join("trace.jsonl")).unwrap();
    assert!(trace.lines().next().unwrap().contains("\"validation_tests\""));
    let tree = std::fs::read_to_string(run.join("tree.json")).unwrap();
    assert!(tree.contains("assert is_sum_of_odds_ten("));
    let replay = replay_run(&run).unwrap();
    assert!(replay.mismatches.is_empty(), "{:?}", replay.mismatches);
}

#[test]
fn exhausted_solve_exits_one() {
    let out = tempfile::tempdir().unwrap();
    let mut spec: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("spec.json")).unwrap()).unwrap();
    spec["tests"] = serde_json::json!(["assert is_sum_of_odds_ten([1]) == True"]);
    let spec_path = out.path().join("failing.json");
    std::fs::write(&spec_path, spec.to_string()).unwrap();
    let runs = out.path().join("runs");
    let o = solve(&runs, spec_path.to_str().unwrap(), &["--max-iters", "1"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let m = RunManifest::read(&only_run_dir(&runs)).unwrap();
    let outcome = m.outcome.unwrap();
    assert_eq!(outcome.status, "exhausted");
    assert_eq!(outcome.iterations_used, Some(1));
}

#[test]
fn configuration_and_environment_exit_codes() {
    let out = tempfile::tempdir().unwrap();
    let o = out.path().to_str().unwrap();
    let spec = fixture("spec.json");
    assert_eq!(soa(&["solve", "--spec", &spec, "--out", o]).status.code(), Some(3));
    assert_eq!(
        soa(&["solve", "--spec", &spec, "--backend", "smoke", "--out", o])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        soa(&["solve", "--spec", "/no/such/spec.json", "--out", o])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        soa(&["solve", "--spec", &spec, "--api-key", "x"]).status.code(),
        Some(2)
    );
    let bad_python = Command::new(env!("CARGO_BIN_EXE_soa"))
        .args(["solve", "--spec", &spec, "--backend", &mock_backend(), "--out", o])
        .env("SOA_PYTHON", "/no/such/python")
        .output()
        .unwrap();
    assert_eq!(bad_python.status.code(), Some(3));
    assert_eq!(std::fs::read_dir(out.path()).unwrap().count(), 0);
}

#[test]
fn run_dirs_are_never_reused() {
    let out = tempfile::tempdir().unwrap();
    let ids: Vec<String> = (0..5).map(|_| create_run_dir(out.path(), "solve").unwrap().0).collect();
    let mut unique = ids.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(unique.len(), 5, "{ids:?}");
}

fn copy_pack(dst: &Path) {
    std::fs::create_dir_all(dst).unwrap();
    for entry in std::fs::read_dir(repo().join("crates/llm/prompts/default")).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dst.join(p.file_name().unwrap())).unwrap();
    }
}

#[test]
fn replay_after_prompt_edit_names_divergent_call() {
    let out = tempfile::tempdir().unwrap();
    let pack = out.path().join("pack");
    copy_pack(&pack);
    let runs = out.path().join("runs");
    let o = solve(&runs, &fixture("spec.json"), &["--prompt-pack", pack.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let run = only_run_dir(&runs);
    assert!(replay_run(&run).unwrap().mismatches.is_empty());

    let skeleton = pack.join("skeleton.txt");
    let edited = std::fs::read_to_string(&skeleton).unwrap() + "\nBe brief.\n";
    std::fs::write(&skeleton, edited).unwrap();
    match replay_run(&run) {
        Err(CliError::Failed(m)) => {
            assert!(m.starts_with("replay diverged"), "{m}");
            assert!(m.contains("skeleton call by `is_sum_of_odds_ten`"), "{m}");
        }
        other => panic!("unexpected {other:?}"),
    }
    let o = soa(&["replay", "--run", run.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn replay_of_crashed_run_stops_at_last_record() {
    let out = tempfile::tempdir().unwrap();
    let o = solve(out.path(), &fixture("spec.json"), &[]);
    assert_eq!(o.status.code(), Some(0));
    let run = only_run_dir(out.path());
    let trace = std::fs::read_to_string(run.join("trace.jsonl")).unwrap();
    let first = trace.lines().next().unwrap();
    std::fs::write(run.join("trace.jsonl"), format!("{first}\n")).unwrap();
    std::fs::remove_file(run.join("tree.json")).unwrap();
    let err = replay_run(&run).unwrap_err();
    assert!(
        err.to_string().contains("child_body call by `is_sum_of_odds_ten/"),
        "{err}"
    );
    let replays: Vec<PathBuf> = std::fs::read_dir(out.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p != &run)
        .collect();
    assert_eq!(replays.len(), 1);
    let m = RunManifest::read(&replays[0]).unwrap();
    assert_eq!(m.outcome.unwrap().status, "error");
    let log = std::fs::read_to_string(replays[0].join("run.log")).unwrap();
    assert!(log.contains("error: "), "{log}");
}

#[test]
fn humaneval_and_analyze() {
    let out = tempfile::tempdir().unwrap();
    let spec: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("spec.json")).unwrap()).unwrap();
    let doc = spec["docstring"].as_str().unwrap().replace('\n', "\n    ");
    let prompt = format!("{}\n    \"\"\"{doc}\n    \"\"\"\n", spec["signature"].as_str().unwrap());
    let line = serde_json::json!({
        "task_id": "Fixture/0",
        "prompt": prompt,
        "entry_point": "is_sum_of_odds_ten",
        "canonical_solution": "",
        "test": "def check(candidate):\n    assert candidate([1, 3, 5, 1]) is True\n    assert candidate([2, 4]) is False\n",
    });
    let data = out.path().join("data.jsonl");
    std::fs::write(&data, format!("{line}\n")).unwrap();
    let runs = out.path().join("runs");
    let backend = mock_backend();
    let o = soa(&[
        "humaneval",
        "--data",
        data.to_str().unwrap(),
        "--backend",
        &backend,
        "--out",
        runs.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("pass@1 1.000 (1/1)"));
    let run = only_run_dir(&runs);
    assert!(run.join("problems/Fixture_0/tree.json").is_file());
    let before = std::fs::read_to_string(run.join("volume.csv")).unwrap();

    let a = soa(&["analyze", "--run", run.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    let table = String::from_utf8_lossy(&a.stdout);
    assert!(
        table.lines().any(|l| l.starts_with("Fixture/0") && l.contains("total")),
        "{table}"
    );
    let after = std::fs::read_to_string(run.join("volume.csv")).unwrap();
    assert_eq!(before, after);

    let r = soa(&["replay", "--run", run.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stdout));
}
