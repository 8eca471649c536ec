use std::sync::Mutex;
use std::time::Duration;

use soa_core::{TestReport, TestResult, TestStatus};

use crate::{codebase_digest, Sandbox, SandboxError};

type Judge = dyn Fn(&str, &str) -> TestStatus + Send + Sync;

/// In-memory stand-in for the process sandbox: a judge function decides
/// each test's status from the code and the test text. Records every call.
pub struct ScriptedSandbox {
    judge: Box<Judge>,
    calls: Mutex<Vec<(String, Vec<String>)>>,
}

impl ScriptedSandbox {
    pub fn new(judge: impl Fn(&str, &str) -> TestStatus + Send + Sync + 'static) -> Self {
        Self {
            judge: Box::new(judge),
            calls: Mutex::new(Vec::new()),
        }
    }

    pub fn all_pass() -> Self {
        Self::new(|_, _| TestStatus::Pass)
    }

    pub fn all_fail() -> Self {
        Self::new(|_, _| TestStatus::Fail)
    }

    /// Every `(code, tests)` pair evaluated so far.
    pub fn calls(&self) -> Vec<(String, Vec<String>)> {
        self.calls.lock().expect("calls lock").clone()
    }
}

impl Sandbox for ScriptedSandbox {
    fn evaluate(&self, code: &str, tests: &[String], _timeout: Duration) -> Result<TestReport, SandboxError> {
        if tests.is_empty() {
            return Err(SandboxError::NoTests("evaluation request".into()));
        }
        self.calls
            .lock()
            .expect("calls lock")
            .push((code.to_string(), tests.to_vec()));
        let results = tests
            .iter()
            .map(|t| {
                let status = (self.judge)(code, t);
                TestResult {
                    test_source: t.clone(),
                    status,
                    message: match status {
                        TestStatus::Pass => String::new(),
                        other => format!("scripted {other:?}").to_lowercase(),
                    },
                    duration_ms: 0.0,
                }
            })
            .collect();
        Ok(TestReport::new(results, codebase_digest(code)))
    }
}
