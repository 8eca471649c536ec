use std::path::Path;

use serde::{Deserialize, Serialize};
use soa_core::{AgentTree, RunConfig, SolveMode};
use soa_llm::LlmClient;
use soa_protocol::{Event, EventLog, ProtocolError, Solver};
use soa_sandbox::Sandbox;

use crate::dataset::{pass_at_1, select_validation_tests, PassAt1, Problem};
use crate::volume::{code_volume, Tokenizer, VolumeReport};
use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemStatus {
    /// Final code passed the hidden tests.
    Passed,
    /// Final code failed the hidden tests.
    Failed,
    /// No final code was produced.
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemRecord {
    pub task_id: String,
    pub status: ProblemStatus,
    pub iterations_used: u32,
    pub volume: Option<VolumeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Artifacts of one problem kept for the run directory.
#[derive(Debug, Clone)]
pub struct ProblemArtifacts {
    pub tree: Option<AgentTree>,
    pub final_code: Option<String>,
    pub events: Vec<Event>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub mode: SolveMode,
    /// Rounded to three decimals.
    pub pass_at_1: f64,
    pub passed: usize,
    pub total: usize,
    pub problems: Vec<ProblemRecord>,
    #[serde(skip)]
    pub artifacts: Vec<ProblemArtifacts>,
}

impl BenchmarkReport {
    pub fn pass_at_1_exact(&self) -> PassAt1 {
        PassAt1 {
            passed: self.passed,
            total: self.total,
        }
    }

    /// Writes `report.json`, `volume.csv` and per-problem `tree.json`,
    /// `events.jsonl` and `final.py` under `problems/<task>/`.
    pub fn write(&self, dir: &Path) -> Result<(), BenchError> {
        let io = |e: std::io::Error| BenchError::Io(e.to_string());
        let json = serde_json::to_string_pretty(self).expect("report serializes") + "\n";
        std::fs::write(dir.join("report.json"), json).map_err(io)?;
        let rows = self
            .problems
            .iter()
            .filter_map(|r| r.volume.as_ref().map(|v| (r.task_id.as_str(), v)));
        write_volume_csv(&dir.join("volume.csv"), rows)?;
        for (record, art) in self.problems.iter().zip(&self.artifacts) {
            let pdir = dir.join("problems").join(sanitize(&record.task_id));
            std::fs::create_dir_all(&pdir).map_err(io)?;
            if let Some(tree) = &art.tree {
                std::fs::write(pdir.join("tree.json"), tree.to_json()).map_err(io)?;
            }
            if let Some(code) = &art.final_code {
                std::fs::write(pdir.join("final.py"), format!("{code}\n")).map_err(io)?;
            }
            let mut events = String::new();
            for e in &art.events {
                events.push_str(&serde_json::to_string(e).expect("event serializes"));
                events.push('\n');
            }
            std::fs::write(pdir.join("events.jsonl"), events).map_err(io)?;
        }
        Ok(())
    }
}

/// Task ids such as `HumanEval/12` as a single path component.
pub fn sanitize(task_id: &str) -> String {
    task_id
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// One row per agent, labelled by task.
pub fn write_volume_csv<'a>(
    path: &Path,
    rows: impl IntoIterator<Item = (&'a str, &'a VolumeReport)>,
) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| BenchError::Io(e.to_string()))?;
    let csv_err = |e: csv::Error| BenchError::Io(e.to_string());
    w.write_record(["task_id", "agent_id", "depth", "chars", "tokens"])
        .map_err(csv_err)?;
    for (task_id, volume) in rows {
        for a in &volume.per_agent {
            w.write_record([
                task_id,
                a.agent_id.as_str(),
                &a.depth.to_string(),
                &a.chars.to_string(),
                &a.tokens.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| BenchError::Io(e.to_string()))
}

struct Outcome {
    record: ProblemRecord,
    artifacts: ProblemArtifacts,
}

/// Solves every problem and scores it against its hidden tests. Problems
/// run concurrently; a failing problem is recorded, never fatal.
pub fn run_benchmark(
    problems: &[Problem],
    config: &RunConfig,
    llm: &LlmClient,
    sandbox: &dyn Sandbox,
    tokenizer: &dyn Tokenizer,
) -> Result<BenchmarkReport, BenchError> {
    if problems.is_empty() {
        return Err(BenchError::Contract("no problems to run".into()));
    }
    let config = match config.mode {
        SolveMode::Soa => config.clone(),
        SolveMode::Single => config.single_agent(),
    };
    config.validate().map_err(|e| BenchError::Contract(e.to_string()))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.concurrency_limit)
        .build()
        .map_err(|e| BenchError::Contract(e.to_string()))?;
    let outcomes: Vec<Outcome> = pool.install(|| {
        use rayon::prelude::*;
        problems
            .par_iter()
            .map(|p| run_problem(p, &config, llm, sandbox, tokenizer))
            .collect()
    });
    let outcomes_ok: Vec<bool> = outcomes
        .iter()
        .map(|o| o.record.status == ProblemStatus::Passed)
        .collect();
    let score = pass_at_1(&outcomes_ok)?;
    let (problems, artifacts) = outcomes.into_iter().map(|o| (o.record, o.artifacts)).unzip();
    Ok(BenchmarkReport {
        mode: config.mode,
        pass_at_1: score.render().parse().expect("rendered fraction parses"),
        passed: score.passed,
        total: score.total,
        problems,
        artifacts,
    })
}

fn run_problem(
    problem: &Problem,
    config: &RunConfig,
    llm: &LlmClient,
    sandbox: &dyn Sandbox,
    tokenizer: &dyn Tokenizer,
) -> Outcome {
    let events = EventLog::in_memory();
    let mut artifacts = ProblemArtifacts {
        tree: None,
        final_code: None,
        events: Vec::new(),
        warnings: Vec::new(),
    };
    let result = solve_problem(problem, config, llm, sandbox, events);
    let record = match result {
        Ok((solved, events)) => {
            artifacts.events = events;
            let hidden = vec![problem.hidden_test_block()];
            let status = match sandbox.evaluate(&solved.final_code, &hidden, config.test_timeout) {
                Ok(r) if r.all_passed => ProblemStatus::Passed,
                Ok(_) => ProblemStatus::Failed,
                Err(e) => {
                    artifacts.warnings.push(format!("hidden test run failed: {e}"));
                    ProblemStatus::Failed
                }
            };
            let volume = code_volume(&solved.tree, tokenizer);
            artifacts.warnings.extend(solved.warnings);
            artifacts.final_code = Some(solved.final_code);
            artifacts.tree = Some(solved.tree);
            ProblemRecord {
                task_id: problem.task_id.clone(),
                status,
                iterations_used: solved.iterations_used,
                volume: Some(volume),
                error: None,
            }
        }
        Err(e) => {
            log::warn!("{}: {e}", problem.task_id);
            ProblemRecord {
                task_id: problem.task_id.clone(),
                status: ProblemStatus::Error,
                iterations_used: 0,
                volume: None,
                error: Some(e.to_string()),
            }
        }
    };
    Outcome { record, artifacts }
}

fn solve_problem(
    problem: &Problem,
    config: &RunConfig,
    llm: &LlmClient,
    sandbox: &dyn Sandbox,
    events: EventLog,
) -> Result<(soa_protocol::SolveResult, Vec<Event>), BenchError> {
    let (preamble, mut spec) = problem.root_spec()?;
    let candidates = llm
        .draft_validation_tests(&spec, config.n_validation_tests, &spec.name)
        .map_err(|e| BenchError::Solve(ProtocolError::Llm(e)))?;
    spec.validation_tests = select_validation_tests(&candidates, config.n_validation_tests, config.seed)?;
    let tree = AgentTree::new(spec, config.max_depth)
        .map_err(|e| BenchError::Solve(e.into()))?
        .with_preamble(preamble);
    let solver = Solver::new(llm, sandbox, config.clone())?.with_events(events);
    let result = solver.solve_tree(tree)?;
    Ok((result, solver.events().events()))
}
