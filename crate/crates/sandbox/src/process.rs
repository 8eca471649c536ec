use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use soa_core::{TestReport, TestResult, TestStatus};

use crate::{codebase_digest, Sandbox, SandboxError};

/// The built-in runner shim.
pub const RUNNER_SHIM: &str = include_str!("../shim/soa_runner.py");

const POLL_INTERVAL: Duration = Duration::from_millis(5);
const MAX_STDERR_CHARS: usize = 4000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShimRequest {
    pub code: String,
    pub tests: Vec<String>,
    pub timeout_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShimResult {
    pub status: TestStatus,
    pub message: String,
    pub duration_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShimResponse {
    pub results: Vec<ShimResult>,
    pub all_passed: bool,
}

#[derive(Debug, Clone)]
enum Shim {
    Embedded,
    Script(PathBuf),
}

/// Runs each evaluation in a fresh interpreter process.
#[derive(Debug, Clone)]
pub struct ProcessSandbox {
    interpreter: String,
    shim: Shim,
}

impl ProcessSandbox {
    /// Checks that the interpreter runs (and the shim exists, when given)
    /// so that a broken environment fails once, up front.
    pub fn new(interpreter: impl Into<String>, shim: Option<PathBuf>) -> Result<Self, SandboxError> {
        let interpreter = interpreter.into();
        let probe = Command::new(&interpreter)
            .arg("--version")
            .stdin(Stdio::null())
            .output()
            .map_err(|e| SandboxError::Environment(format!("cannot run `{interpreter}`: {e}")))?;
        if !probe.status.success() {
            return Err(SandboxError::Environment(format!(
                "`{interpreter} --version` exited with {}",
                probe.status
            )));
        }
        let shim = match shim {
            Some(path) if !path.is_file() => {
                return Err(SandboxError::Environment(format!(
                    "runner shim {} not found",
                    path.display()
                )))
            }
            Some(path) => Shim::Script(path),
            None => Shim::Embedded,
        };
        Ok(Self { interpreter, shim })
    }

    fn command(&self) -> Command {
        let mut cmd = Command::new(&self.interpreter);
        match &self.shim {
            Shim::Embedded => {
                cmd.args(["-I", "-B", "-c", RUNNER_SHIM]);
            }
            Shim::Script(path) => {
                cmd.arg(path);
            }
        }
        cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
        cmd
    }
}

struct Finished {
    exit_code: Option<i32>,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
    killed: bool,
}

fn run_with_backstop(mut cmd: Command, payload: Vec<u8>, limit: Duration) -> std::io::Result<Finished> {
    let mut child = cmd.spawn()?;
    let mut stdin = child.stdin.take().expect("stdin is piped");
    let writer = thread::spawn(move || {
        // The runner may exit before reading everything; that is not our error.
        let _ = stdin.write_all(&payload);
    });
    let mut stdout = child.stdout.take().expect("stdout is piped");
    let mut stderr = child.stderr.take().expect("stderr is piped");
    let out_reader = thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = stdout.read_to_end(&mut buf);
        buf
    });
    let err_reader = thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = stderr.read_to_end(&mut buf);
        buf
    });
    let deadline = Instant::now() + limit;
    let (status, killed) = loop {
        if let Some(status) = child.try_wait()? {
            break (status, false);
        }
        if Instant::now() >= deadline {
            let _ = child.kill();
            break (child.wait()?, true);
        }
        thread::sleep(POLL_INTERVAL);
    };
    let _ = writer.join();
    Ok(Finished {
        exit_code: status.code(),
        stdout: out_reader.join().unwrap_or_default(),
        stderr: err_reader.join().unwrap_or_default(),
        killed,
    })
}

fn uniform_results(tests: &[String], status: TestStatus, message: &str) -> Vec<TestResult> {
    tests
        .iter()
        .map(|t| TestResult {
            test_source: t.clone(),
            status,
            message: message.to_string(),
            duration_ms: 0.0,
        })
        .collect()
}

impl Sandbox for ProcessSandbox {
    fn evaluate(&self, code: &str, tests: &[String], timeout: Duration) -> Result<TestReport, SandboxError> {
        if tests.is_empty() {
            return Err(SandboxError::NoTests("evaluation request".into()));
        }
        let request = ShimRequest {
            code: code.to_string(),
            tests: tests.to_vec(),
            timeout_s: timeout.as_secs_f64(),
        };
        let payload = serde_json::to_vec(&request).expect("request serializes");
        let limit = timeout * 2;
        let finished = run_with_backstop(self.command(), payload, limit)?;
        let digest = codebase_digest(code);

        if finished.killed {
            log::warn!("test runner killed after {:?}", limit);
            let message = format!("runner killed after the {:.1}s hard limit", limit.as_secs_f64());
            return Ok(TestReport::new(
                uniform_results(tests, TestStatus::Timeout, &message),
                digest,
            ));
        }

        let parsed = (finished.exit_code == Some(0))
            .then(|| serde_json::from_slice::<ShimResponse>(&finished.stdout).ok())
            .flatten()
            .filter(|r| r.results.len() == tests.len());
        let results = match parsed {
            Some(response) => tests
                .iter()
                .zip(response.results)
                .map(|(test, r)| TestResult {
                    test_source: test.clone(),
                    status: r.status,
                    message: r.message,
                    duration_ms: r.duration_ms,
                })
                .collect(),
            None => {
                let stderr = String::from_utf8_lossy(&finished.stderr);
                let stderr: String = stderr.chars().take(MAX_STDERR_CHARS).collect();
                let exit = finished
                    .exit_code
                    .map_or_else(|| "signal".to_string(), |c| c.to_string());
                let message = format!("test runner failed (exit {exit}): {}", stderr.trim_end());
                uniform_results(tests, TestStatus::Error, &message)
            }
        };
        Ok(TestReport::new(results, digest))
    }
}
