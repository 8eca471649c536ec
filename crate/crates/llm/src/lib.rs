//! Prompt construction, response parsing and interchangeable completion
//! backends (OpenAI-compatible HTTP, scripted mock, trace replay).

pub mod backend;
pub mod client;
pub mod error;
pub mod pack;
pub mod parse;
pub mod trace;

pub use backend::{Backend, BackendFailure, HttpBackend, MockBackend, ReplayBackend, Reply, Request, API_KEY_VAR};
pub use client::{LlmClient, RetryPolicy};
pub use error::LlmError;
pub use pack::{FewShotExample, PackError, PromptPack, Slots, Template};
pub use parse::{
    parse_body, parse_code_blocks, parse_revision, parse_skeleton, parse_validation_tests, CodeBlock, ParseError,
    Skeleton,
};
pub use trace::{read_trace, request_digest, TraceRecord, TraceSink, Usage};
