use crate::pack::{PackError, Template};
use crate::parse::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum LlmError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("HTTP {status}: {body}")]
    Http { status: u16, body: String },
    #[error("gave up after {attempts} attempts: {last}")]
    RetriesExhausted { attempts: u32, last: Box<LlmError> },
    #[error("no mock fixture for key `{0}`")]
    MockMiss(String),
    #[error("no recorded response for {template} call by `{agent_path}` (digest {digest})")]
    ReplayMiss {
        digest: String,
        template: Template,
        agent_path: String,
    },
    #[error("{template} response for `{agent_path}` unusable after re-prompt: {error}")]
    Parse {
        template: Template,
        agent_path: String,
        error: ParseError,
    },
    #[error("rendered {0} prompt contains credential material; refusing to send")]
    SecretInPrompt(Template),
    #[error("environment: {0}")]
    Environment(String),
    #[error("trace: {0}")]
    Trace(String),
    #[error(transparent)]
    Pack(#[from] PackError),
}
