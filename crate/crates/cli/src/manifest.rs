use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use soa_core::RunConfig;

use crate::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunKind {
    Solve,
    Humaneval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    /// `passed`, `exhausted`, `finished` or `error`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations_used: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass_at_1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunOutcome {
    pub fn error(message: impl Into<String>) -> Self {
        Self {
            status: "error".into(),
            iterations_used: None,
            passed: None,
            total: None,
            pass_at_1: None,
            error: Some(message.into()),
        }
    }
}

/// Written before the first model call and rewritten when the run ends, so
/// a manifest without `finished_at` marks a crashed run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub run_id: String,
    pub kind: RunKind,
    pub started_at: DateTime<Utc>,
    #[serde(default)]
    pub finished_at: Option<DateTime<Utc>>,
    pub config: RunConfig,
    pub seed: u64,
    pub backend: String,
    pub prompt_pack_digest: String,
    /// Input copied into the run directory.
    pub input: String,
    #[serde(default)]
    pub outcome: Option<RunOutcome>,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let json = serde_json::to_string_pretty(self).expect("manifest serializes") + "\n";
        std::fs::write(dir.join(MANIFEST_FILE), json).map_err(|e| CliError::io(dir, e))
    }

    pub fn read(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn finish(&mut self, dir: &Path, outcome: RunOutcome) -> Result<(), CliError> {
        self.finished_at = Some(Utc::now());
        self.outcome = Some(outcome);
        self.write(dir)
    }
}

/// Creates `<out>/<prefix>-<UTC timestamp>`, adding a counter instead of
/// reusing an existing directory.
pub fn create_run_dir(out: &Path, prefix: &str) -> Result<(String, PathBuf), CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let stamp = Utc::now().format("%Y%m%dT%H%M%S%.3fZ");
    let base = format!("{prefix}-{stamp}");
    for n in 0u32.. {
        let id = if n == 0 { base.clone() } else { format!("{base}-{n}") };
        let dir = out.join(&id);
        match std::fs::create_dir(&dir) {
            Ok(()) => return Ok((id, dir)),
            Err(e) if e.kind() == ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(CliError::io(&dir, e)),
        }
    }
    unreachable!("run directory counter exhausted")
}
