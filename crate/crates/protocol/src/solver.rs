use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use soa_core::{
    AgentId, AgentKind, AgentTree, FunctionSpec, RunConfig, TestReport, TestResult, TestStatus, UpperObservation,
};
use soa_llm::{LlmClient, LlmError, Skeleton};
use soa_sandbox::{codebase_digest, Sandbox, SandboxError};

use crate::events::{EventKind, EventLog};
use crate::ProtocolError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Passed,
    Exhausted,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub final_code: String,
    pub status: SolveStatus,
    /// Number of modification rounds run.
    pub iterations_used: u32,
    pub tree: AgentTree,
    /// Root evaluation before any modification, then one per round.
    pub per_iteration_reports: Vec<TestReport>,
    pub warnings: Vec<String>,
}

/// Runs the generation and modification protocol for one configuration.
/// Work on one tree level runs concurrently; results are committed in
/// sibling order so trees and event logs are deterministic.
pub struct Solver<'a> {
    llm: &'a LlmClient,
    sandbox: &'a dyn Sandbox,
    config: RunConfig,
    events: EventLog,
    pool: rayon::ThreadPool,
    warnings: Mutex<Vec<String>>,
}

enum Draft {
    Skeleton(Skeleton),
    Body(String),
}

struct RevisionInput {
    id: AgentId,
    spec: FunctionSpec,
    path: String,
    latest: String,
    observation: Option<UpperObservation>,
}

impl<'a> Solver<'a> {
    pub fn new(llm: &'a LlmClient, sandbox: &'a dyn Sandbox, config: RunConfig) -> Result<Self, ProtocolError> {
        config.validate()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.concurrency_limit)
            .thread_name(|i| format!("soa-worker-{i}"))
            .build()
            .map_err(|e| ProtocolError::Contract(format!("cannot start worker pool: {e}")))?;
        Ok(Self {
            llm,
            sandbox,
            config,
            events: EventLog::in_memory(),
            pool,
            warnings: Mutex::new(Vec::new()),
        })
    }

    pub fn with_events(mut self, events: EventLog) -> Self {
        self.events = events;
        self
    }

    pub fn events(&self) -> &EventLog {
        &self.events
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    fn warn(&self, message: String) {
        log::warn!("{message}");
        self.warnings.lock().unwrap_or_else(|p| p.into_inner()).push(message);
    }

    fn take_warnings(&self) -> Vec<String> {
        std::mem::take(&mut *self.warnings.lock().unwrap_or_else(|p| p.into_inner()))
    }

    fn emit(
        &self,
        tree: &AgentTree,
        id: &AgentId,
        iteration: u32,
        event: EventKind,
        payload: &str,
    ) -> Result<(), ProtocolError> {
        let node = tree.node(id)?;
        self.events
            .record(iteration, id, node.depth, node.kind, event, payload)
            .map_err(|e| ProtocolError::Io(e.to_string()))
    }

    /// Drafts code for `agent_id` and every agent spawned beneath it, level
    /// by level. Mothers store their skeleton's host code and spawn one
    /// agent per subtask; Children store a complete body.
    pub fn generate_subtree(&self, tree: &mut AgentTree, agent_id: &AgentId) -> Result<(), ProtocolError> {
        let mut level = vec![agent_id.clone()];
        while !level.is_empty() {
            let jobs = level
                .iter()
                .map(|id| {
                    let node = tree.node(id)?;
                    if !node.memory.is_empty() {
                        return Err(ProtocolError::Contract(format!("agent {id} already has code")));
                    }
                    Ok((node.kind, node.spec.clone(), tree.agent_path(id)?))
                })
                .collect::<Result<Vec<_>, ProtocolError>>()?;
            let drafts: Vec<Result<Draft, LlmError>> = self.pool.install(|| {
                use rayon::prelude::*;
                jobs.par_iter()
                    .map(|(kind, spec, path)| match kind {
                        AgentKind::Mother => self.llm.draft_skeleton(spec, path).map(Draft::Skeleton),
                        AgentKind::Child => self.llm.draft_body(spec, path).map(Draft::Body),
                    })
                    .collect()
            });
            let mut next = Vec::new();
            for ((id, (_, _, path)), draft) in level.iter().zip(jobs).zip(drafts) {
                let draft = draft.map_err(|source| ProtocolError::Generation {
                    agent_path: path.clone(),
                    source,
                })?;
                match draft {
                    Draft::Body(code) => {
                        tree.append_version(id, &code, 0)?;
                        self.emit(tree, id, 0, EventKind::Draft, &code)?;
                    }
                    Draft::Skeleton(skeleton) => {
                        let subtasks = self.cap_subtasks(&path, skeleton);
                        let spawned = tree.spawn_subtasks(id, &subtasks.host_code, subtasks.subtasks)?;
                        for w in subtasks.warnings.into_iter().chain(spawned.warnings) {
                            self.warn(format!("{path}: {w}"));
                        }
                        tree.append_version(id, &spawned.host_code, 0)?;
                        self.emit(tree, id, 0, EventKind::Draft, &spawned.host_code)?;
                        for child in &spawned.ids {
                            let spec = serde_json::to_string(&tree.node(child)?.spec).expect("spec serializes");
                            self.emit(tree, child, 0, EventKind::Spawn, &spec)?;
                        }
                        next.extend(spawned.ids);
                    }
                }
            }
            level = next;
        }
        Ok(())
    }

    fn cap_subtasks(&self, path: &str, mut skeleton: Skeleton) -> Skeleton {
        let cap = self.config.max_fanout;
        if skeleton.subtasks.len() > cap {
            let dropped: Vec<String> = skeleton.subtasks.drain(cap..).map(|s| s.name).collect();
            self.warn(format!(
                "{path}: skeleton declared more than {cap} subtasks; dropped {}",
                dropped.join(", ")
            ));
        }
        let limit = self.config.max_subtask_tests;
        for sub in &mut skeleton.subtasks {
            if sub.validation_tests.len() > limit {
                sub.validation_tests.truncate(limit);
                self.warn(format!(
                    "{path}: kept the first {limit} tests of subtask `{}`",
                    sub.name
                ));
            }
        }
        skeleton
    }

    /// Revises `agent_id` from `report`, then walks its subtree level by
    /// level: each agent's tests run against the assembly that includes its
    /// parent's revision, and it revises with its parent's observation.
    pub fn modify_subtree(
        &self,
        tree: &mut AgentTree,
        agent_id: &AgentId,
        report: &TestReport,
        upper_obs: Option<&UpperObservation>,
        iteration: u32,
    ) -> Result<(), ProtocolError> {
        if iteration < 1 {
            return Err(ProtocolError::Contract("modification iterations start at 1".into()));
        }
        let root = self.revision_input(tree, agent_id, upper_obs.cloned())?;
        let outcome = self.revise(&root, report);
        let mut frontier = self.commit_revision(tree, root, outcome, iteration)?;
        while !frontier.is_empty() {
            let snapshot = tree.assemble_codebase()?;
            let jobs = frontier
                .into_iter()
                .map(|(id, obs)| self.revision_input(tree, &id, obs))
                .collect::<Result<Vec<_>, _>>()?;
            let outcomes: Vec<Result<(TestReport, RevisionOutcome), ProtocolError>> = self.pool.install(|| {
                use rayon::prelude::*;
                jobs.par_iter()
                    .map(|job| {
                        let report = self.evaluate(&snapshot, &job.spec.validation_tests)?;
                        let outcome = self.revise(job, &report);
                        Ok((report, outcome))
                    })
                    .collect()
            });
            let mut next = Vec::new();
            for (job, outcome) in jobs.into_iter().zip(outcomes) {
                let (report, outcome) = outcome?;
                self.emit(tree, &job.id, iteration, EventKind::Evaluate, &report_payload(&report))?;
                next.extend(self.commit_revision(tree, job, outcome, iteration)?);
            }
            frontier = next;
        }
        Ok(())
    }

    fn revision_input(
        &self,
        tree: &AgentTree,
        id: &AgentId,
        observation: Option<UpperObservation>,
    ) -> Result<RevisionInput, ProtocolError> {
        let node = tree.node(id)?;
        let latest = node
            .latest_source()
            .ok_or_else(|| ProtocolError::Contract(format!("agent {id} has no code to revise")))?;
        Ok(RevisionInput {
            id: id.clone(),
            spec: node.spec.clone(),
            path: tree.agent_path(id)?,
            latest: latest.to_string(),
            observation,
        })
    }

    fn revise(&self, job: &RevisionInput, report: &TestReport) -> RevisionOutcome {
        self.llm
            .critique_and_revise(&job.spec, &job.path, &job.latest, report, job.observation.as_ref())
    }

    /// Stores a revision and returns the children to visit next, each with
    /// the observation it should receive.
    fn commit_revision(
        &self,
        tree: &mut AgentTree,
        job: RevisionInput,
        outcome: RevisionOutcome,
        iteration: u32,
    ) -> Result<Vec<(AgentId, Option<UpperObservation>)>, ProtocolError> {
        let observation = match outcome {
            Ok((feedback, code)) => {
                tree.append_version(&job.id, &code, iteration)?;
                let after = tree.node(&job.id)?.latest_source().unwrap_or_default().to_string();
                self.emit(
                    tree,
                    &job.id,
                    iteration,
                    EventKind::Revise,
                    &format!("{feedback}\n{after}"),
                )?;
                UpperObservation::new(feedback, job.latest, after)
            }
            Err(e) if is_fatal(&e) => return Err(ProtocolError::Llm(e)),
            Err(e) => {
                self.warn(format!("{}: skipped revision at iteration {iteration}: {e}", job.path));
                None
            }
        };
        Ok(tree
            .node(&job.id)?
            .children
            .iter()
            .map(|c| (c.clone(), observation.clone()))
            .collect())
    }

    /// Runs tests against a codebase. An agent without tests gets an empty,
    /// vacuously passing report; runner failures become error results.
    fn evaluate(&self, code: &str, tests: &[String]) -> Result<TestReport, ProtocolError> {
        if tests.is_empty() {
            return Ok(TestReport::new(Vec::new(), codebase_digest(code)));
        }
        match self.sandbox.evaluate(code, tests, self.config.test_timeout) {
            Ok(report) => Ok(report),
            Err(SandboxError::Io(e)) => {
                self.warn(format!("test runner failed: {e}"));
                Ok(error_report(code, tests, &e.to_string()))
            }
            Err(e) => Err(ProtocolError::Sandbox(e)),
        }
    }

    /// Full solve loop: generate the tree, then alternate root evaluation
    /// and modification until the tests pass or the round budget is spent.
    pub fn solve(&self, spec: FunctionSpec) -> Result<SolveResult, ProtocolError> {
        if self.config.max_depth < 2 {
            return Err(ProtocolError::Contract("solve needs max_depth >= 2".into()));
        }
        self.run(spec, AgentTree::new)
    }

    /// Baseline: one agent drafts the whole function and self-revises.
    pub fn single_agent_solve(&self, spec: FunctionSpec) -> Result<SolveResult, ProtocolError> {
        self.run(spec, |spec, _| AgentTree::new(spec, 1))
    }

    fn run(
        &self,
        spec: FunctionSpec,
        new_tree: impl FnOnce(FunctionSpec, u32) -> soa_core::Result<AgentTree>,
    ) -> Result<SolveResult, ProtocolError> {
        self.solve_tree(new_tree(spec, self.config.max_depth)?)
    }

    /// Solves starting from a fresh tree (root only, possibly carrying a
    /// preamble).
    pub fn solve_tree(&self, mut tree: AgentTree) -> Result<SolveResult, ProtocolError> {
        let root = tree.root().clone();
        let tests = tree.root_node().spec.validation_tests.clone();
        if tests.is_empty() {
            return Err(ProtocolError::Contract(format!(
                "`{}` has no validation tests",
                tree.root_node().spec.name
            )));
        }
        if tree.len() != 1 || !tree.root_node().memory.is_empty() {
            return Err(ProtocolError::Contract("solve needs a fresh single-node tree".into()));
        }
        self.take_warnings();
        let spec_json = serde_json::to_string(&tree.root_node().spec).expect("spec serializes");
        self.emit(&tree, &root, 0, EventKind::Spawn, &spec_json)?;
        self.generate_subtree(&mut tree, &root)?;

        let mut reports = Vec::new();
        let mut round = 0;
        loop {
            let code = tree.assemble_codebase()?;
            let report = self.evaluate(&code, &tests)?;
            self.emit(&tree, &root, round, EventKind::Evaluate, &report_payload(&report))?;
            let passed = report.all_passed;
            reports.push(report);
            if (passed && self.config.early_stop_on_pass) || round >= self.config.max_iterations {
                break;
            }
            round += 1;
            let last = reports.last().expect("just pushed").clone();
            self.modify_subtree(&mut tree, &root, &last, None, round)?;
        }
        let final_code = tree.assemble_codebase()?;
        let status = if reports.last().is_some_and(|r| r.all_passed) {
            SolveStatus::Passed
        } else {
            SolveStatus::Exhausted
        };
        Ok(SolveResult {
            final_code,
            status,
            iterations_used: round,
            tree,
            per_iteration_reports: reports,
            warnings: self.take_warnings(),
        })
    }
}

type RevisionOutcome = Result<(String, String), LlmError>;

/// Failures that make continuing meaningless: a replay that diverged from
/// its recording, or an unwritable trace.
fn is_fatal(e: &LlmError) -> bool {
    matches!(
        e,
        LlmError::ReplayMiss { .. } | LlmError::Trace(_) | LlmError::Environment(_)
    )
}

fn report_payload(report: &TestReport) -> String {
    let statuses: Vec<TestStatus> = report.results.iter().map(|r| r.status).collect();
    serde_json::json!({"codebase": report.codebase_digest, "statuses": statuses}).to_string()
}

fn error_report(code: &str, tests: &[String], message: &str) -> TestReport {
    TestReport::new(
        tests
            .iter()
            .map(|t| TestResult {
                test_source: t.clone(),
                status: TestStatus::Error,
                message: message.to_string(),
                duration_ms: 0.0,
            })
            .collect(),
        codebase_digest(code),
    )
}
