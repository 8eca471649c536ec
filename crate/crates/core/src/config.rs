use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

pub const DEFAULT_BASE_URL: &str = "https://api.openai.com/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    /// Self-organized multi-agent tree.
    #[default]
    Soa,
    /// One agent iterating draft, test, revise.
    Single,
}

impl FromStr for SolveMode {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "soa" => Ok(SolveMode::Soa),
            "single" => Ok(SolveMode::Single),
            other => Err(CoreError::Config(format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for SolveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveMode::Soa => "soa",
            SolveMode::Single => "single",
        })
    }
}

/// Which completion backend a run talks to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BackendDescriptor {
    /// OpenAI-compatible HTTP endpoint; the key comes from the environment.
    Openai { base_url: String },
    /// Scripted responses from a fixture file.
    Mock { fixtures: PathBuf },
    /// Responses served from a previous run's trace.
    Replay { run_dir: PathBuf },
}

impl Default for BackendDescriptor {
    fn default() -> Self {
        BackendDescriptor::Openai {
            base_url: DEFAULT_BASE_URL.to_string(),
        }
    }
}

impl FromStr for BackendDescriptor {
    type Err = CoreError;

    /// Parses `openai`, `mock:<fixtures>`, or `replay:<dir>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "openai" {
            return Ok(BackendDescriptor::default());
        }
        if let Some(path) = s.strip_prefix("mock:").filter(|p| !p.is_empty()) {
            return Ok(BackendDescriptor::Mock {
                fixtures: PathBuf::from(path),
            });
        }
        if let Some(path) = s.strip_prefix("replay:").filter(|p| !p.is_empty()) {
            return Ok(BackendDescriptor::Replay {
                run_dir: PathBuf::from(path),
            });
        }
        Err(CoreError::Config(format!(
            "unknown backend `{s}` (expected openai, mock:<fixtures>, or replay:<dir>)"
        )))
    }
}

impl fmt::Display for BackendDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendDescriptor::Openai { base_url } => write!(f, "openai({base_url})"),
            BackendDescriptor::Mock { fixtures } => write!(f, "mock:{}", fixtures.display()),
            BackendDescriptor::Replay { run_dir } => write!(f, "replay:{}", run_dir.display()),
        }
    }
}

mod duration_ms {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

/// Everything that parameterizes a solve or benchmark run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: SolveMode,
    pub max_depth: u32,
    /// Upper bound on modification rounds.
    pub max_iterations: u32,
    /// Size of the root validation suite.
    pub n_validation_tests: usize,
    pub seed: u64,
    pub concurrency_limit: usize,
    #[serde(rename = "test_timeout_ms", with = "duration_ms")]
    pub test_timeout: Duration,
    pub early_stop_on_pass: bool,
    pub backend: BackendDescriptor,
    /// Prompt pack directory; the built-in pack when absent.
    pub prompt_pack: Option<PathBuf>,
    pub model: String,
    pub temperature: f64,
    /// Maximum number of subtasks kept from one skeleton.
    pub max_fanout: usize,
    /// Maximum number of validation tests kept per subtask.
    pub max_subtask_tests: usize,
    /// Python interpreter used to run tests.
    pub python: String,
    /// Test runner script; the built-in runner when absent.
    pub shim: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: SolveMode::Soa,
            max_depth: 2,
            max_iterations: 8,
            n_validation_tests: 1,
            seed: 0,
            concurrency_limit: 4,
            test_timeout: Duration::from_secs(10),
            early_stop_on_pass: true,
            backend: BackendDescriptor::default(),
            prompt_pack: None,
            model: "gpt-3.5-turbo-1106".to_string(),
            temperature: 0.0,
            max_fanout: 8,
            max_subtask_tests: 3,
            python: "python3".to_string(),
            shim: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(CoreError::Config(msg.to_string()));
        if self.max_depth < 1 {
            return fail("max_depth must be at least 1");
        }
        if self.mode == SolveMode::Soa && self.max_depth < 2 {
            return fail("max_depth 1 is reserved for the single-agent mode");
        }
        if self.n_validation_tests < 1 {
            return fail("n_validation_tests must be at least 1");
        }
        if self.concurrency_limit < 1 {
            return fail("concurrency_limit must be at least 1");
        }
        if self.test_timeout.is_zero() {
            return fail("test_timeout must be positive");
        }
        if self.max_fanout < 1 {
            return fail("max_fanout must be at least 1");
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return fail("temperature must be within [0, 2]");
        }
        Ok(())
    }

    /// The configuration actually used by the single-agent baseline.
    pub fn single_agent(&self) -> Self {
        Self {
            mode: SolveMode::Single,
            max_depth: 1,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_setup() {
        let c = RunConfig::default();
        assert_eq!((c.max_depth, c.max_iterations, c.n_validation_tests), (2, 8, 1));
        assert_eq!(c.test_timeout, Duration::from_secs(10));
        assert!(c.early_stop_on_pass);
        c.validate().unwrap();
    }

    #[test]
    fn depth_one_only_for_single_agent() {
        let soa = RunConfig {
            max_depth: 1,
            ..RunConfig::default()
        };
        assert!(soa.validate().is_err());
        soa.single_agent().validate().unwrap();
    }

    #[test]
    fn backend_descriptor_parsing() {
        assert_eq!(
            "mock:fx.json".parse::<BackendDescriptor>().unwrap(),
            BackendDescriptor::Mock {
                fixtures: "fx.json".into()
            }
        );
        assert!(matches!(
            "replay:runs/a".parse::<BackendDescriptor>().unwrap(),
            BackendDescriptor::Replay { .. }
        ));
        assert!("openai".parse::<BackendDescriptor>().is_ok());
        assert!("mock:".parse::<BackendDescriptor>().is_err());
        assert!("claude".parse::<BackendDescriptor>().is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let c = RunConfig::default();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"test_timeout_ms\":10000"));
        let back: RunConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
