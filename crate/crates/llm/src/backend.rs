use std::collections::{BTreeMap, HashMap, VecDeque};
use std::path::Path;
use std::sync::Mutex;
use std::time::Duration;

use serde::Deserialize;

use crate::error::LlmError;
use crate::pack::Template;
use crate::trace::{read_trace, Usage};

pub const API_KEY_VAR: &str = "SOA_API_KEY";

#[derive(Debug, Clone)]
pub struct Request<'a> {
    pub template: Template,
    pub agent_path: &'a str,
    pub prompt: &'a str,
    pub model: &'a str,
    pub temperature: f64,
    pub digest: &'a str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reply {
    pub text: String,
    pub usage: Option<Usage>,
}

impl Reply {
    fn text(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            usage: None,
        }
    }
}

#[derive(Debug)]
pub struct BackendFailure {
    pub error: LlmError,
    pub retryable: bool,
}

impl BackendFailure {
    pub fn fatal(error: LlmError) -> Self {
        Self {
            error,
            retryable: false,
        }
    }

    pub fn retryable(error: LlmError) -> Self {
        Self { error, retryable: true }
    }
}

pub trait Backend: Send + Sync {
    fn complete(&self, request: &Request<'_>) -> Result<Reply, BackendFailure>;

    /// Credential that must never appear in a prompt.
    fn secret(&self) -> Option<&str> {
        None
    }
}

/// OpenAI-compatible chat completions over HTTP.
pub struct HttpBackend {
    agent: ureq::Agent,
    url: String,
    api_key: String,
}

impl HttpBackend {
    /// Reads the key from `SOA_API_KEY`.
    pub fn from_env(base_url: &str, timeout: Duration) -> Result<Self, LlmError> {
        let key = std::env::var(API_KEY_VAR)
            .ok()
            .filter(|k| !k.trim().is_empty())
            .ok_or_else(|| LlmError::Environment(format!("{API_KEY_VAR} is not set")))?;
        Ok(Self::new(base_url, key, timeout))
    }

    pub fn new(base_url: &str, api_key: String, timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(timeout))
            .build()
            .into();
        Self {
            agent,
            url: format!("{}/chat/completions", base_url.trim_end_matches('/')),
            api_key,
        }
    }
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
    usage: Option<Usage>,
}

#[derive(Deserialize)]
struct Choice {
    message: Message,
}

#[derive(Deserialize)]
struct Message {
    content: Option<String>,
}

impl Backend for HttpBackend {
    fn complete(&self, request: &Request<'_>) -> Result<Reply, BackendFailure> {
        let body = serde_json::json!({
            "model": request.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
        });
        let mut response = self
            .agent
            .post(&self.url)
            .header("Authorization", &format!("Bearer {}", self.api_key))
            .send_json(&body)
            .map_err(|e| BackendFailure::retryable(LlmError::Transport(e.to_string())))?;
        let status = response.status().as_u16();
        let text = response
            .body_mut()
            .read_to_string()
            .map_err(|e| BackendFailure::retryable(LlmError::Transport(e.to_string())))?;
        if status == 429 || status >= 500 {
            return Err(BackendFailure::retryable(LlmError::Http {
                status,
                body: truncate(&text, 500),
            }));
        }
        if !(200..300).contains(&status) {
            return Err(BackendFailure::fatal(LlmError::Http {
                status,
                body: truncate(&text, 500),
            }));
        }
        let parsed: ChatResponse = serde_json::from_str(&text)
            .map_err(|e| BackendFailure::fatal(LlmError::Transport(format!("malformed completion body: {e}"))))?;
        let content = parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| BackendFailure::fatal(LlmError::Transport("completion has no message content".into())))?;
        Ok(Reply {
            text: content,
            usage: parsed.usage,
        })
    }

    fn secret(&self) -> Option<&str> {
        Some(&self.api_key)
    }
}

fn truncate(s: &str, max: usize) -> String {
    match s.char_indices().nth(max) {
        Some((i, _)) => format!("{}...", &s[..i]),
        None => s.to_string(),
    }
}

/// Scripted responses keyed by `"{template}:{agent_path}"`. A key with a
/// `#n` suffix overrides the response for the n-th call (1-based) to that
/// key; otherwise every call gets the plain entry.
pub struct MockBackend {
    fixtures: BTreeMap<String, String>,
    calls: Mutex<HashMap<String, usize>>,
}

impl MockBackend {
    pub fn new(fixtures: BTreeMap<String, String>) -> Self {
        Self {
            fixtures,
            calls: Mutex::new(HashMap::new()),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, LlmError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LlmError::Environment(format!("cannot read mock fixtures {}: {e}", path.display())))?;
        let fixtures = serde_json::from_str(&text).map_err(|e| {
            LlmError::Environment(format!(
                "mock fixtures {} are not a JSON map of strings: {e}",
                path.display()
            ))
        })?;
        Ok(Self::new(fixtures))
    }

    pub fn key(template: Template, agent_path: &str) -> String {
        format!("{template}:{agent_path}")
    }
}

impl Backend for MockBackend {
    fn complete(&self, request: &Request<'_>) -> Result<Reply, BackendFailure> {
        let key = Self::key(request.template, request.agent_path);
        let n = {
            let mut calls = self.calls.lock().unwrap_or_else(|e| e.into_inner());
            let count = calls.entry(key.clone()).or_insert(0);
            *count += 1;
            *count
        };
        self.fixtures
            .get(&format!("{key}#{n}"))
            .or_else(|| self.fixtures.get(&key))
            .map(Reply::text)
            .ok_or_else(|| BackendFailure::fatal(LlmError::MockMiss(key)))
    }
}

/// Serves responses recorded in a run's `trace.jsonl`, matched by digest.
/// Repeated digests are served in recorded order.
pub struct ReplayBackend {
    responses: Mutex<HashMap<String, VecDeque<String>>>,
}

impl ReplayBackend {
    pub fn from_run_dir(dir: &Path) -> Result<Self, LlmError> {
        let path = dir.join("trace.jsonl");
        let records =
            read_trace(&path).map_err(|e| LlmError::Environment(format!("cannot read {}: {e}", path.display())))?;
        let mut responses: HashMap<String, VecDeque<String>> = HashMap::new();
        for r in records.into_iter().filter(|r| r.error.is_none()) {
            responses.entry(r.digest).or_default().push_back(r.response);
        }
        Ok(Self {
            responses: Mutex::new(responses),
        })
    }
}

impl Backend for ReplayBackend {
    fn complete(&self, request: &Request<'_>) -> Result<Reply, BackendFailure> {
        let mut responses = self.responses.lock().unwrap_or_else(|e| e.into_inner());
        responses
            .get_mut(request.digest)
            .and_then(VecDeque::pop_front)
            .map(Reply::text)
            .ok_or_else(|| {
                BackendFailure::fatal(LlmError::ReplayMiss {
                    digest: request.digest.to_string(),
                    template: request.template,
                    agent_path: request.agent_path.to_string(),
                })
            })
    }
}
