//! HumanEval ingestion, validation-test selection, benchmark runs, Pass@1,
//! and code-volume analysis.

mod dataset;
mod run;
mod strip;
mod volume;

pub use dataset::{load_humaneval, pass_at_1, select_validation_tests, PassAt1, Problem};
pub use run::{
    run_benchmark, sanitize, write_volume_csv, BenchmarkReport, ProblemArtifacts, ProblemRecord, ProblemStatus,
};
pub use strip::{strip_code, StripError};
pub use volume::{code_volume, source_volume, AgentVolume, LexicalTokenizer, Tokenizer, VolumeReport};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("dataset line {line}: {reason}")]
    Load { line: usize, reason: String },
    #[error("{task_id}: {reason}")]
    Problem { task_id: String, reason: String },
    #[error("need {needed} validation tests but only {available} candidates")]
    TooFewCandidates { needed: usize, available: usize },
    #[error(transparent)]
    Solve(#[from] soa_protocol::ProtocolError),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("io: {0}")]
    Io(String),
}
