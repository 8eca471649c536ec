use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestStatus {
    Pass,
    Fail,
    Error,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub test_source: String,
    pub status: TestStatus,
    pub message: String,
    pub duration_ms: f64,
}

/// Outcome of running a list of tests against one codebase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    /// One entry per input test, in input order.
    pub results: Vec<TestResult>,
    pub all_passed: bool,
    pub codebase_digest: String,
}

impl TestReport {
    pub fn new(results: Vec<TestResult>, codebase_digest: impl Into<String>) -> Self {
        let all_passed = results.iter().all(|r| r.status == TestStatus::Pass);
        Self {
            results,
            all_passed,
            codebase_digest: codebase_digest.into(),
        }
    }

    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.status == TestStatus::Pass).count()
    }

    /// Plain-text rendering used in prompts. Timing is left out so that
    /// prompts stay reproducible.
    pub fn render(&self) -> String {
        if self.results.is_empty() {
            return "No tests were run.".to_string();
        }
        let mut out = format!("{} of {} tests passed.\n", self.passed(), self.results.len());
        for r in &self.results {
            let label = match r.status {
                TestStatus::Pass => "PASSED",
                TestStatus::Fail => "FAILED",
                TestStatus::Error => "ERROR",
                TestStatus::Timeout => "TIMED OUT",
            };
            out.push_str(&format!("\n[{label}] {}", r.test_source));
            if !r.message.is_empty() && r.status != TestStatus::Pass {
                out.push_str(&format!("\n    {}", r.message.trim_end()));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(status: TestStatus) -> TestResult {
        TestResult {
            test_source: "assert f() == 1".into(),
            status,
            message: "boom".into(),
            duration_ms: 1.0,
        }
    }

    #[test]
    fn all_passed_tracks_statuses() {
        assert!(TestReport::new(vec![result(TestStatus::Pass)], "d").all_passed);
        for bad in [TestStatus::Fail, TestStatus::Error, TestStatus::Timeout] {
            let r = TestReport::new(vec![result(TestStatus::Pass), result(bad)], "d");
            assert!(!r.all_passed);
        }
    }

    #[test]
    fn render_lists_failures() {
        let r = TestReport::new(vec![result(TestStatus::Fail)], "d");
        assert_eq!(r.render(), "0 of 1 tests passed.\n\n[FAILED] assert f() == 1\n    boom");
    }

    #[test]
    fn status_wire_names() {
        assert_eq!(serde_json::to_string(&TestStatus::Timeout).unwrap(), "\"timeout\"");
    }
}
