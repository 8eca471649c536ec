use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use soa_core::python;
use soa_core::FunctionSpec;

use crate::BenchError;

/// One HumanEval problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    pub task_id: String,
    /// Signature and docstring, possibly preceded by imports and helpers.
    pub prompt: String,
    pub entry_point: String,
    /// The dataset's `check(candidate)` program.
    #[serde(rename = "test")]
    pub hidden_tests: String,
    #[serde(default)]
    pub canonical_solution: String,
}

impl Problem {
    /// Hidden test block: the check program applied to the entry point.
    pub fn hidden_test_block(&self) -> String {
        format!("{}\ncheck({})", self.hidden_tests.trim_end(), self.entry_point)
    }

    /// Splits the prompt into a preamble (everything before the entry
    /// point's `def`) and the root spec, which has no tests yet.
    pub fn root_spec(&self) -> Result<(String, FunctionSpec), BenchError> {
        let bad = |reason: String| BenchError::Problem {
            task_id: self.task_id.clone(),
            reason,
        };
        let defs = python::function_defs(&self.prompt).map_err(|e| bad(format!("prompt does not tokenize: {e}")))?;
        let def = defs
            .iter()
            .rev()
            .find(|d| d.name == self.entry_point)
            .ok_or_else(|| bad(format!("prompt does not define `{}`", self.entry_point)))?;
        let docstring = def
            .docstring
            .clone()
            .filter(|d| !d.trim().is_empty())
            .unwrap_or_else(|| format!("Implement `{}`.", self.entry_point));
        let preamble = self.prompt[..def.start].trim_end().to_string();
        let spec = FunctionSpec::new(&self.entry_point, def.signature.clone(), docstring, Vec::new())
            .map_err(|e| bad(e.to_string()))?;
        Ok((preamble, spec))
    }
}

const FIELDS: [&str; 5] = ["task_id", "prompt", "entry_point", "test", "canonical_solution"];

/// Reads a HumanEval JSONL file, one problem per non-blank line.
pub fn load_humaneval(path: &Path) -> Result<Vec<Problem>, BenchError> {
    let file = std::fs::File::open(path).map_err(|e| BenchError::Load {
        line: 0,
        reason: format!("{}: {e}", path.display()),
    })?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i + 1;
        let err = |reason: String| BenchError::Load { line: line_no, reason };
        let line = line.map_err(|e| err(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(&line).map_err(|e| err(e.to_string()))?;
        for field in FIELDS {
            if !value.get(field).is_some_and(serde_json::Value::is_string) {
                return Err(err(format!("missing string field `{field}`")));
            }
        }
        let problem: Problem = serde_json::from_value(value).map_err(|e| err(e.to_string()))?;
        let defines_check =
            python::function_defs(&problem.hidden_tests).is_ok_and(|defs| defs.iter().any(|d| d.name == "check"));
        if !defines_check {
            return Err(err("test program does not define `check`".into()));
        }
        out.push(problem);
    }
    Ok(out)
}

/// Uniform sample of `n` candidates without replacement, seeded, keeping
/// the candidates' original order.
pub fn select_validation_tests(candidates: &[String], n: usize, seed: u64) -> Result<Vec<String>, BenchError> {
    if candidates.len() < n {
        return Err(BenchError::TooFewCandidates {
            needed: n,
            available: candidates.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample(&mut rng, candidates.len(), n).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| candidates[i].clone()).collect())
}

/// Pass@1 as an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassAt1 {
    pub passed: usize,
    pub total: usize,
}

impl PassAt1 {
    pub fn value(&self) -> f64 {
        self.passed as f64 / self.total as f64
    }

    /// Three decimals, rounding halves up, computed on integers.
    pub fn render(&self) -> String {
        let scaled = (self.passed as u128 * 2000 + self.total as u128) / (2 * self.total as u128);
        format!("{}.{:03}", scaled / 1000, scaled % 1000)
    }
}

pub fn pass_at_1(outcomes: &[bool]) -> Result<PassAt1, BenchError> {
    if outcomes.is_empty() {
        return Err(BenchError::Contract("pass@1 of zero problems".into()));
    }
    Ok(PassAt1 {
        passed: outcomes.iter().filter(|o| **o).count(),
        total: outcomes.len(),
    })
}
