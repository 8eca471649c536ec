use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use soa_core::{AgentId, AgentKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Spawn,
    Draft,
    Evaluate,
    Revise,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub ts: String,
    pub iteration: u32,
    pub agent_id: AgentId,
    pub depth: u32,
    pub kind: AgentKind,
    pub event: EventKind,
    pub payload_digest: String,
}

pub fn payload_digest(payload: &str) -> String {
    hex::encode(Sha256::digest(payload.as_bytes()))
}

/// Totally ordered event collector, optionally mirrored to `events.jsonl`.
#[derive(Debug, Default)]
pub struct EventLog {
    inner: Mutex<Inner>,
}

#[derive(Debug, Default)]
struct Inner {
    file: Option<File>,
    events: Vec<Event>,
}

impl EventLog {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn to_file(path: &Path) -> std::io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self {
            inner: Mutex::new(Inner {
                file: Some(file),
                events: Vec::new(),
            }),
        })
    }

    pub fn record(
        &self,
        iteration: u32,
        agent_id: &AgentId,
        depth: u32,
        kind: AgentKind,
        event: EventKind,
        payload: &str,
    ) -> std::io::Result<()> {
        let e = Event {
            ts: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            iteration,
            agent_id: agent_id.clone(),
            depth,
            kind,
            event,
            payload_digest: payload_digest(payload),
        };
        let mut inner = self.inner.lock().unwrap_or_else(|p| p.into_inner());
        if let Some(f) = inner.file.as_mut() {
            let mut line = serde_json::to_string(&e).expect("event serializes");
            line.push('\n');
            f.write_all(line.as_bytes())?;
        }
        inner.events.push(e);
        Ok(())
    }

    pub fn events(&self) -> Vec<Event> {
        self.inner.lock().unwrap_or_else(|p| p.into_inner()).events.clone()
    }
}

pub fn read_events(path: &Path) -> std::io::Result<Vec<Event>> {
    let mut out = Vec::new();
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?);
    }
    Ok(out)
}
