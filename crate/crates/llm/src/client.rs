use std::sync::{Arc, Condvar, Mutex};
use std::time::{Duration, Instant};

use soa_core::{FunctionSpec, TestReport, UpperObservation};

use crate::backend::{Backend, Request};
use crate::error::LlmError;
use crate::pack::{PromptPack, Slots, Template};
use crate::parse::{self, ParseError, Skeleton};
use crate::trace::{request_digest, TraceRecord, TraceSink};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay: Duration,
    pub max_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_attempts: 5,
            base_delay: Duration::from_secs(1),
            max_delay: Duration::from_secs(30),
        }
    }
}

impl RetryPolicy {
    /// Delay after the `attempt`-th failure (1-based): base * 2^(attempt-1), capped.
    pub fn delay(&self, attempt: u32) -> Duration {
        let factor = 1u32 << attempt.saturating_sub(1).min(16);
        self.base_delay.saturating_mul(factor).min(self.max_delay)
    }
}

/// Counting semaphore bounding in-flight requests across all agents.
#[derive(Debug)]
struct Limiter {
    free: Mutex<usize>,
    cv: Condvar,
}

struct Permit<'a>(&'a Limiter);

impl Limiter {
    fn new(n: usize) -> Self {
        Self {
            free: Mutex::new(n.max(1)),
            cv: Condvar::new(),
        }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().unwrap_or_else(|e| e.into_inner());
        while *free == 0 {
            free = self.cv.wait(free).unwrap_or_else(|e| e.into_inner());
        }
        *free -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap_or_else(|e| e.into_inner()) += 1;
        self.0.cv.notify_one();
    }
}

/// Renders prompts, calls the backend with retries under a global
/// concurrency ceiling, traces every attempt, and parses responses.
pub struct LlmClient {
    backend: Arc<dyn Backend>,
    pack: PromptPack,
    trace: Arc<TraceSink>,
    retry: RetryPolicy,
    limiter: Limiter,
    model: String,
    temperature: f64,
}

impl LlmClient {
    pub fn new(
        backend: Arc<dyn Backend>,
        pack: PromptPack,
        trace: Arc<TraceSink>,
        model: impl Into<String>,
        temperature: f64,
        concurrency: usize,
    ) -> Self {
        Self {
            backend,
            pack,
            trace,
            retry: RetryPolicy::default(),
            limiter: Limiter::new(concurrency),
            model: model.into(),
            temperature,
        }
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn trace(&self) -> &Arc<TraceSink> {
        &self.trace
    }

    pub fn pack(&self) -> &PromptPack {
        &self.pack
    }

    /// One logical completion: retries retryable failures with exponential
    /// backoff. Every attempt is traced.
    pub fn complete(&self, template: Template, agent_path: &str, prompt: &str) -> Result<String, LlmError> {
        if let Some(secret) = self.backend.secret() {
            if !secret.is_empty() && prompt.contains(secret) {
                return Err(LlmError::SecretInPrompt(template));
            }
        }
        let digest = request_digest(template, prompt, &self.model, self.temperature);
        let request = Request {
            template,
            agent_path,
            prompt,
            model: &self.model,
            temperature: self.temperature,
            digest: &digest,
        };
        let mut attempt = 0;
        loop {
            attempt += 1;
            let started = Instant::now();
            let ts = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true);
            let outcome = {
                let _permit = self.limiter.acquire();
                self.backend.complete(&request)
            };
            let latency_ms = started.elapsed().as_secs_f64() * 1000.0;
            let mut record = TraceRecord {
                digest: digest.clone(),
                template,
                agent_path: agent_path.to_string(),
                prompt: prompt.to_string(),
                response: String::new(),
                model: self.model.clone(),
                ts,
                latency_ms,
                usage: None,
                error: None,
            };
            match outcome {
                Ok(reply) => {
                    record.response = reply.text.clone();
                    record.usage = reply.usage;
                    self.append(record)?;
                    return Ok(reply.text);
                }
                Err(failure) => {
                    record.error = Some(failure.error.to_string());
                    self.append(record)?;
                    if !failure.retryable {
                        return Err(failure.error);
                    }
                    if attempt >= self.retry.max_attempts {
                        return Err(LlmError::RetriesExhausted {
                            attempts: attempt,
                            last: Box::new(failure.error),
                        });
                    }
                    log::warn!(
                        "{template} call for {agent_path} failed (attempt {attempt}): {}",
                        failure.error
                    );
                    std::thread::sleep(self.retry.delay(attempt));
                }
            }
        }
    }

    fn append(&self, record: TraceRecord) -> Result<(), LlmError> {
        self.trace.append(record).map_err(|e| LlmError::Trace(e.to_string()))
    }

    /// Calls and parses; on a parse failure re-prompts once with the parser's
    /// message appended.
    fn exchange<T>(
        &self,
        template: Template,
        agent_path: &str,
        prompt: &str,
        parse: impl Fn(&str) -> Result<T, ParseError>,
    ) -> Result<T, LlmError> {
        let first = self.complete(template, agent_path, prompt)?;
        let error = match parse(&first) {
            Ok(v) => return Ok(v),
            Err(e) => e,
        };
        log::info!("re-prompting {template} for {agent_path}: {error}");
        let retry_prompt = format!(
            "{prompt}\n\nYour previous reply could not be used: {error}\nReply again and follow the required format exactly."
        );
        let second = self.complete(template, agent_path, &retry_prompt)?;
        parse(&second).map_err(|error| LlmError::Parse {
            template,
            agent_path: agent_path.to_string(),
            error,
        })
    }

    pub fn render(&self, template: Template, slots: &Slots<'_>) -> String {
        self.pack.render(template, slots)
    }

    pub fn draft_skeleton(&self, spec: &FunctionSpec, agent_path: &str) -> Result<Skeleton, LlmError> {
        let prompt = self.render(
            Template::Skeleton,
            &Slots {
                spec: Some(spec),
                ..Default::default()
            },
        );
        self.exchange(Template::Skeleton, agent_path, &prompt, |r| {
            parse::parse_skeleton(r, spec)
        })
    }

    pub fn draft_body(&self, spec: &FunctionSpec, agent_path: &str) -> Result<String, LlmError> {
        let prompt = self.render(
            Template::ChildBody,
            &Slots {
                spec: Some(spec),
                ..Default::default()
            },
        );
        self.exchange(Template::ChildBody, agent_path, &prompt, |r| parse::parse_body(r, spec))
    }

    /// Returns at least `n` distinct candidate asserts referencing the
    /// function.
    pub fn draft_validation_tests(
        &self,
        spec: &FunctionSpec,
        n: usize,
        agent_path: &str,
    ) -> Result<Vec<String>, LlmError> {
        let prompt = self.render(
            Template::ValidationTests,
            &Slots {
                spec: Some(spec),
                n_tests: Some(n),
                ..Default::default()
            },
        );
        self.exchange(Template::ValidationTests, agent_path, &prompt, |r| {
            parse::parse_validation_tests(r, spec, n)
        })
    }

    /// Returns (feedback, revised code) from a single exchange.
    pub fn critique_and_revise(
        &self,
        spec: &FunctionSpec,
        agent_path: &str,
        latest_code: &str,
        report: &TestReport,
        observation: Option<&UpperObservation>,
    ) -> Result<(String, String), LlmError> {
        let prompt = self.render(
            Template::CritiqueAndRevise,
            &Slots {
                spec: Some(spec),
                latest_code: Some(latest_code),
                report: Some(report),
                observation,
                n_tests: None,
            },
        );
        self.exchange(Template::CritiqueAndRevise, agent_path, &prompt, |r| {
            parse::parse_revision(r, spec)
        })
    }
}
