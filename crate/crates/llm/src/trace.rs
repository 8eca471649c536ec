use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::pack::Template;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Usage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

/// One backend exchange as written to `trace.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub digest: String,
    pub template: Template,
    pub agent_path: String,
    pub prompt: String,
    pub response: String,
    pub model: String,
    pub ts: String,
    pub latency_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub usage: Option<Usage>,
    /// Set on failed attempts; `response` is empty then.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Digest of a request: sha256 over canonical JSON of its inputs.
pub fn request_digest(template: Template, prompt: &str, model: &str, temperature: f64) -> String {
    let canonical = serde_json::json!({
        "model": model,
        "prompt": prompt,
        "temperature": temperature,
        "template": template.as_str(),
    });
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

/// Serialized, append-only trace writer. Records are also kept in memory.
#[derive(Debug, Default)]
pub struct TraceSink {
    inner: Mutex<SinkInner>,
}

#[derive(Debug, Default)]
struct SinkInner {
    file: Option<File>,
    records: Vec<TraceRecord>,
}

impl TraceSink {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn to_file(path: &Path) -> std::io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self {
            inner: Mutex::new(SinkInner {
                file: Some(file),
                records: Vec::new(),
            }),
        })
    }

    pub fn append(&self, record: TraceRecord) -> std::io::Result<()> {
        let mut inner = self.inner.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(file) = inner.file.as_mut() {
            let mut line = serde_json::to_string(&record).expect("trace record serializes");
            line.push('\n');
            file.write_all(line.as_bytes())?;
            file.flush()?;
        }
        inner.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> Vec<TraceRecord> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner()).records.clone()
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap_or_else(|e| e.into_inner()).records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn read_trace(path: &Path) -> std::io::Result<Vec<TraceRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| {
            std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("{}:{}: {e}", path.display(), i + 1),
            )
        })?;
        out.push(record);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_pure_and_sensitive() {
        let a = request_digest(Template::Skeleton, "p", "m", 0.0);
        assert_eq!(a, request_digest(Template::Skeleton, "p", "m", 0.0));
        assert_eq!(a.len(), 64);
        assert_ne!(a, request_digest(Template::ChildBody, "p", "m", 0.0));
        assert_ne!(a, request_digest(Template::Skeleton, "p ", "m", 0.0));
        assert_ne!(a, request_digest(Template::Skeleton, "p", "m2", 0.0));
        assert_ne!(a, request_digest(Template::Skeleton, "p", "m", 0.5));
    }
}
