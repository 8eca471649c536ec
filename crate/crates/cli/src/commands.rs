use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use soa_bench::{
    code_volume, load_humaneval, run_benchmark, sanitize, write_volume_csv, BenchmarkReport, LexicalTokenizer,
    VolumeReport,
};
use soa_core::{AgentTree, BackendDescriptor, FunctionSpec, RunConfig, SolveMode};
use soa_llm::{Backend, HttpBackend, LlmClient, MockBackend, PromptPack, ReplayBackend, TraceSink};
use soa_protocol::{EventLog, SolveResult, SolveStatus, Solver};
use soa_sandbox::ProcessSandbox;

use crate::manifest::{create_run_dir, RunKind, RunManifest, RunOutcome};
use crate::CliError;

const HTTP_TIMEOUT: Duration = Duration::from_secs(120);
const SPEC_FILE: &str = "spec.json";
const PROBLEMS_FILE: &str = "problems.jsonl";

/// Input format of `soa solve --spec`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub name: String,
    pub signature: String,
    pub docstring: String,
    #[serde(default)]
    pub tests: Option<Vec<String>>,
}

pub fn parse_spec(text: &str) -> Result<FunctionSpec, CliError> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| CliError::Config(format!("spec: {e}")))?;
    FunctionSpec::new(
        &file.name,
        file.signature,
        file.docstring,
        file.tests.unwrap_or_default(),
    )
    .map_err(|e| CliError::Config(format!("spec: {e}")))
}

pub fn build_backend(desc: &BackendDescriptor) -> Result<Arc<dyn Backend>, CliError> {
    Ok(match desc {
        BackendDescriptor::Openai { base_url } => Arc::new(HttpBackend::from_env(base_url, HTTP_TIMEOUT)?),
        BackendDescriptor::Mock { fixtures } => {
            Arc::new(MockBackend::from_file(fixtures).map_err(|e| CliError::Config(e.to_string()))?)
        }
        BackendDescriptor::Replay { run_dir } => {
            Arc::new(ReplayBackend::from_run_dir(run_dir).map_err(|e| CliError::Config(e.to_string()))?)
        }
    })
}

fn build_pack(config: &RunConfig) -> Result<PromptPack, CliError> {
    match &config.prompt_pack {
        Some(dir) => PromptPack::load(dir).map_err(|e| CliError::Config(format!("prompt pack: {e}"))),
        None => Ok(PromptPack::builtin()),
    }
}

fn build_sandbox(config: &RunConfig) -> Result<ProcessSandbox, CliError> {
    ProcessSandbox::new(config.python.clone(), config.shim.clone()).map_err(|e| CliError::Environment(e.to_string()))
}

/// Everything a run needs, built before its directory exists so that
/// configuration and environment errors leave nothing behind.
struct Prepared {
    config: RunConfig,
    backend: Arc<dyn Backend>,
    pack: PromptPack,
    sandbox: ProcessSandbox,
}

fn prepare(config: RunConfig) -> Result<Prepared, CliError> {
    config.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let pack = build_pack(&config)?;
    let sandbox = build_sandbox(&config)?;
    let backend = build_backend(&config.backend)?;
    Ok(Prepared {
        config,
        backend,
        pack,
        sandbox,
    })
}

struct RunContext {
    dir: PathBuf,
    manifest: RunManifest,
    llm: LlmClient,
    sandbox: ProcessSandbox,
}

fn start_run(
    prepared: Prepared,
    out: &Path,
    prefix: &str,
    kind: RunKind,
    input: &[u8],
) -> Result<RunContext, CliError> {
    let (run_id, dir) = create_run_dir(out, prefix)?;
    let input_name = match kind {
        RunKind::Solve => SPEC_FILE,
        RunKind::Humaneval => PROBLEMS_FILE,
    };
    std::fs::write(dir.join(input_name), input).map_err(|e| CliError::io(&dir, e))?;
    let config = prepared.config;
    let manifest = RunManifest {
        run_id,
        kind,
        started_at: chrono::Utc::now(),
        finished_at: None,
        seed: config.seed,
        backend: config.backend.to_string(),
        prompt_pack_digest: prepared.pack.digest(),
        input: input_name.to_string(),
        outcome: None,
        config,
    };
    manifest.write(&dir)?;
    let trace = TraceSink::to_file(&dir.join("trace.jsonl")).map_err(|e| CliError::io(&dir, e))?;
    let llm = LlmClient::new(
        prepared.backend,
        prepared.pack,
        Arc::new(trace),
        manifest.config.model.clone(),
        manifest.config.temperature,
        manifest.config.concurrency_limit,
    );
    Ok(RunContext {
        dir,
        manifest,
        llm,
        sandbox: prepared.sandbox,
    })
}

fn write_file(dir: &Path, name: &str, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    std::fs::write(dir.join(name), contents).map_err(|e| CliError::io(dir, e))
}

fn write_log(dir: &Path, warnings: &[String], error: Option<&CliError>) -> Result<(), CliError> {
    let mut log = String::new();
    for w in warnings {
        let _ = writeln!(log, "warning: {w}");
    }
    if let Some(e) = error {
        let _ = writeln!(log, "error: {e}");
    }
    write_file(dir, "run.log", log)
}

/// Seals the run: log, manifest outcome, then the result itself.
fn finish<T>(
    ctx: &mut RunContext,
    warnings: &[String],
    result: Result<T, CliError>,
    outcome: impl FnOnce(&T) -> RunOutcome,
) -> Result<T, CliError> {
    match result {
        Ok(value) => {
            write_log(&ctx.dir, warnings, None)?;
            ctx.manifest.finish(&ctx.dir, outcome(&value))?;
            Ok(value)
        }
        Err(e) => {
            write_log(&ctx.dir, warnings, Some(&e))?;
            ctx.manifest.finish(&ctx.dir, RunOutcome::error(e.to_string()))?;
            Err(e)
        }
    }
}

#[derive(Debug)]
pub struct SolveRun {
    pub run_dir: PathBuf,
    pub result: SolveResult,
}

#[derive(Serialize)]
struct SolveReport<'a> {
    status: SolveStatus,
    iterations_used: u32,
    per_iteration_reports: &'a [soa_core::TestReport],
    warnings: &'a [String],
}

/// `soa solve`: drafts validation tests when the spec has none, then runs
/// the full protocol.
pub fn run_solve(spec_path: &Path, config: RunConfig, out: &Path) -> Result<SolveRun, CliError> {
    let input = std::fs::read(spec_path).map_err(|e| CliError::Config(format!("{}: {e}", spec_path.display())))?;
    let text = String::from_utf8(input.clone()).map_err(|e| CliError::Config(format!("spec: {e}")))?;
    parse_spec(&text)?;
    let prepared = prepare(config)?;
    let mut ctx = start_run(prepared, out, "solve", RunKind::Solve, &input)?;
    solve_in(&mut ctx, &text)
}

fn solve_in(ctx: &mut RunContext, spec_text: &str) -> Result<SolveRun, CliError> {
    let result = solve_steps(ctx, spec_text);
    let warnings = result.as_ref().map(|r| r.warnings.clone()).unwrap_or_default();
    let result = finish(ctx, &warnings, result, |r| RunOutcome {
        status: match r.status {
            SolveStatus::Passed => "passed".into(),
            SolveStatus::Exhausted => "exhausted".into(),
        },
        iterations_used: Some(r.iterations_used),
        passed: None,
        total: None,
        pass_at_1: None,
        error: None,
    })?;
    Ok(SolveRun {
        run_dir: ctx.dir.clone(),
        result,
    })
}

fn solve_steps(ctx: &RunContext, spec_text: &str) -> Result<SolveResult, CliError> {
    let config = &ctx.manifest.config;
    let mut spec = parse_spec(spec_text)?;
    if spec.validation_tests.is_empty() {
        let candidates = ctx
            .llm
            .draft_validation_tests(&spec, config.n_validation_tests, &spec.name)
            .map_err(CliError::from_llm)?;
        spec.validation_tests =
            soa_bench::select_validation_tests(&candidates, config.n_validation_tests, config.seed)?;
    }
    let events = EventLog::to_file(&ctx.dir.join("events.jsonl")).map_err(|e| CliError::io(&ctx.dir, e))?;
    let solver = Solver::new(&ctx.llm, &ctx.sandbox, config.clone())?.with_events(events);
    let result = match config.mode {
        SolveMode::Soa => solver.solve(spec)?,
        SolveMode::Single => solver.single_agent_solve(spec)?,
    };
    write_file(&ctx.dir, "tree.json", result.tree.to_json())?;
    write_file(&ctx.dir, "final_code.py", format!("{}\n", result.final_code))?;
    let report = SolveReport {
        status: result.status,
        iterations_used: result.iterations_used,
        per_iteration_reports: &result.per_iteration_reports,
        warnings: &result.warnings,
    };
    write_file(
        &ctx.dir,
        "report.json",
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
    )?;
    Ok(result)
}

#[derive(Debug)]
pub struct HumanevalRun {
    pub run_dir: PathBuf,
    pub report: BenchmarkReport,
}

/// `soa humaneval`: runs the first `limit` problems of a HumanEval file.
pub fn run_humaneval(
    data: &Path,
    limit: Option<usize>,
    config: RunConfig,
    out: &Path,
) -> Result<HumanevalRun, CliError> {
    let mut problems = load_humaneval(data).map_err(|e| CliError::Config(format!("{}: {e}", data.display())))?;
    if let Some(limit) = limit {
        problems.truncate(limit);
    }
    if problems.is_empty() {
        return Err(CliError::Config(format!("{} holds no problems", data.display())));
    }
    let mut input = String::new();
    for p in &problems {
        input.push_str(&serde_json::to_string(p).expect("problem serializes"));
        input.push('\n');
    }
    let prepared = prepare(config)?;
    let mut ctx = start_run(prepared, out, "humaneval", RunKind::Humaneval, input.as_bytes())?;
    humaneval_in(&mut ctx)
}

fn humaneval_in(ctx: &mut RunContext) -> Result<HumanevalRun, CliError> {
    let result = humaneval_steps(ctx);
    let warnings: Vec<String> = match &result {
        Ok(report) => report
            .problems
            .iter()
            .zip(&report.artifacts)
            .flat_map(|(p, a)| {
                let task = p.task_id.clone();
                a.warnings
                    .iter()
                    .map(move |w| format!("{task}: {w}"))
                    .chain(p.error.iter().map(|e| format!("{}: {e}", p.task_id)))
            })
            .collect(),
        Err(_) => Vec::new(),
    };
    let report = finish(ctx, &warnings, result, |r| RunOutcome {
        status: "finished".into(),
        iterations_used: None,
        passed: Some(r.passed),
        total: Some(r.total),
        pass_at_1: Some(r.pass_at_1_exact().render()),
        error: None,
    })?;
    Ok(HumanevalRun {
        run_dir: ctx.dir.clone(),
        report,
    })
}

fn humaneval_steps(ctx: &RunContext) -> Result<BenchmarkReport, CliError> {
    let problems = load_humaneval(&ctx.dir.join(PROBLEMS_FILE))?;
    let report = run_benchmark(
        &problems,
        &ctx.manifest.config,
        &ctx.llm,
        &ctx.sandbox,
        &LexicalTokenizer,
    )?;
    report.write(&ctx.dir)?;
    Ok(report)
}

/// `soa analyze`: per-agent volume of every tree in a run directory.
/// Writes `volume.csv` and returns the rows by task.
pub fn analyze_run(run_dir: &Path) -> Result<Vec<(String, VolumeReport)>, CliError> {
    let read_tree = |path: &Path| -> Result<AgentTree, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        AgentTree::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    };
    let mut rows = Vec::new();
    let single = run_dir.join("tree.json");
    if single.is_file() {
        let tree = read_tree(&single)?;
        rows.push((
            tree.root_node().spec.name.clone(),
            code_volume(&tree, &LexicalTokenizer),
        ));
    } else {
        let problems = run_dir.join("problems");
        let entries = std::fs::read_dir(&problems)
            .map_err(|_| CliError::Config(format!("{} holds no tree.json or problems/", run_dir.display())))?;
        let mut dirs: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
        dirs.sort();
        let task_ids = report_task_ids(run_dir);
        for dir in dirs {
            let path = dir.join("tree.json");
            if path.is_file() {
                let name = dir
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default();
                let task = task_ids.iter().find(|t| sanitize(t) == name).cloned().unwrap_or(name);
                rows.push((task, code_volume(&read_tree(&path)?, &LexicalTokenizer)));
            }
        }
    }
    write_volume_csv(&run_dir.join("volume.csv"), rows.iter().map(|(t, v)| (t.as_str(), v)))?;
    Ok(rows)
}

/// Task ids listed in a benchmark run's `report.json`, if readable.
fn report_task_ids(run_dir: &Path) -> Vec<String> {
    let Ok(text) = std::fs::read_to_string(run_dir.join("report.json")) else {
        return Vec::new();
    };
    let Ok(report) = serde_json::from_str::<serde_json::Value>(&text) else {
        return Vec::new();
    };
    report["problems"]
        .as_array()
        .map(|ps| {
            ps.iter()
                .filter_map(|p| p["task_id"].as_str().map(String::from))
                .collect()
        })
        .unwrap_or_default()
}

pub fn format_volume_table(rows: &[(String, VolumeReport)]) -> String {
    let mut out = format!(
        "{:<24} {:<12} {:>5} {:>8} {:>8}\n",
        "task", "agent", "depth", "chars", "tokens"
    );
    for (task, v) in rows {
        for a in &v.per_agent {
            let mark = if a.raw { " (raw)" } else { "" };
            let _ = writeln!(
                out,
                "{task:<24} {:<12} {:>5} {:>8} {:>8}{mark}",
                a.agent_id, a.depth, a.chars, a.tokens
            );
        }
        let _ = writeln!(
            out,
            "{task:<24} {:<12} {:>5} {:>8} {:>8}  max {} mean {:.1}",
            "total",
            "",
            v.total_chars,
            v.total_tokens,
            v.max_agent_chars(),
            v.per_function_mean_chars
        );
    }
    out
}

#[derive(Debug)]
pub struct ReplayRun {
    pub original: PathBuf,
    pub run_dir: PathBuf,
    /// Artifacts that differ from the original run; empty when identical.
    pub mismatches: Vec<String>,
}

/// `soa replay`: re-executes a run against its own trace in a new sibling
/// directory and compares tree and final code byte for byte.
pub fn replay_run(original: &Path) -> Result<ReplayRun, CliError> {
    let manifest = RunManifest::read(original)?;
    let input = std::fs::read(original.join(&manifest.input)).map_err(|e| CliError::io(original, e))?;
    let config = RunConfig {
        backend: BackendDescriptor::Replay {
            run_dir: original.to_path_buf(),
        },
        ..manifest.config.clone()
    };
    let prepared = prepare(config)?;
    let out = original.parent().unwrap_or(Path::new("."));
    let prefix = format!("{}-replay", manifest.run_id);
    let mut ctx = start_run(prepared, out, &prefix, manifest.kind, &input)?;
    let compared: Vec<PathBuf> = match manifest.kind {
        RunKind::Solve => {
            let text = String::from_utf8(input).map_err(|e| CliError::Config(format!("spec: {e}")))?;
            solve_in(&mut ctx, &text).map_err(replay_error)?;
            vec!["tree.json".into(), "final_code.py".into()]
        }
        RunKind::Humaneval => {
            let run = humaneval_in(&mut ctx).map_err(replay_error)?;
            run.report
                .problems
                .iter()
                .flat_map(|p| {
                    let dir = Path::new("problems").join(sanitize(&p.task_id));
                    [dir.join("tree.json"), dir.join("final.py")]
                })
                .collect()
        }
    };
    let mut mismatches = Vec::new();
    for rel in compared {
        let a = std::fs::read(original.join(&rel)).ok();
        let b = std::fs::read(ctx.dir.join(&rel)).ok();
        if a != b {
            mismatches.push(rel.display().to_string());
        }
    }
    Ok(ReplayRun {
        original: original.to_path_buf(),
        run_dir: ctx.dir,
        mismatches,
    })
}

fn replay_error(e: CliError) -> CliError {
    match e {
        CliError::Failed(m) => CliError::Failed(format!("replay diverged: {m}")),
        other => other,
    }
}
