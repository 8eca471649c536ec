use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use soa_core::{FunctionSpec, TestReport, UpperObservation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Template {
    Skeleton,
    ChildBody,
    ValidationTests,
    CritiqueAndRevise,
}

impl Template {
    pub const ALL: [Template; 4] = [
        Template::Skeleton,
        Template::ChildBody,
        Template::ValidationTests,
        Template::CritiqueAndRevise,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Template::Skeleton => "skeleton",
            Template::ChildBody => "child_body",
            Template::ValidationTests => "validation_tests",
            Template::CritiqueAndRevise => "critique_and_revise",
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Placeholder names a template may reference as `{{slot}}`.
pub const SLOTS: [&str; 8] = [
    "docstring",
    "signature",
    "tests",
    "latest_code",
    "test_report",
    "upper_observation",
    "few_shot",
    "n_tests",
];

#[derive(Debug, thiserror::Error)]
pub enum PackError {
    #[error("cannot read prompt pack file {path}: {message}")]
    Io { path: String, message: String },
    #[error("template {template} references unknown slot `{slot}`")]
    UnknownSlot { template: Template, slot: String },
    #[error("template {template} has an unclosed `{{{{` at byte {offset}")]
    Unclosed { template: Template, offset: usize },
    #[error("few_shot.json: {0}")]
    FewShot(String),
}

/// One worked example shown to the model before the real request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FewShotExample {
    pub template: Template,
    pub request: String,
    pub response: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptPack {
    skeleton: String,
    child_body: String,
    validation_tests: String,
    critique_and_revise: String,
    few_shot: Vec<FewShotExample>,
}

/// Slot values for one rendering. Unset slots render as empty text.
#[derive(Debug, Clone, Default)]
pub struct Slots<'a> {
    pub spec: Option<&'a FunctionSpec>,
    pub latest_code: Option<&'a str>,
    pub report: Option<&'a TestReport>,
    pub observation: Option<&'a UpperObservation>,
    pub n_tests: Option<usize>,
}

impl PromptPack {
    pub fn new(
        skeleton: impl Into<String>,
        child_body: impl Into<String>,
        validation_tests: impl Into<String>,
        critique_and_revise: impl Into<String>,
        few_shot: Vec<FewShotExample>,
    ) -> Result<Self, PackError> {
        let pack = Self {
            skeleton: skeleton.into(),
            child_body: child_body.into(),
            validation_tests: validation_tests.into(),
            critique_and_revise: critique_and_revise.into(),
            few_shot,
        };
        for t in Template::ALL {
            placeholders(t, pack.template(t))?;
        }
        Ok(pack)
    }

    /// The pack compiled into the binary.
    pub fn builtin() -> Self {
        let few_shot = serde_json::from_str(include_str!("../prompts/default/few_shot.json"))
            .expect("built-in few-shot examples parse");
        Self::new(
            include_str!("../prompts/default/skeleton.txt"),
            include_str!("../prompts/default/child_body.txt"),
            include_str!("../prompts/default/validation_tests.txt"),
            include_str!("../prompts/default/critique_and_revise.txt"),
            few_shot,
        )
        .expect("built-in prompt pack is valid")
    }

    /// Loads `<name>.txt` for each template and an optional `few_shot.json`.
    pub fn load(dir: &Path) -> Result<Self, PackError> {
        let read = |file: &str| {
            let path = dir.join(file);
            std::fs::read_to_string(&path).map_err(|e| PackError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })
        };
        let few_shot_path = dir.join("few_shot.json");
        let few_shot = if few_shot_path.exists() {
            serde_json::from_str(&read("few_shot.json")?).map_err(|e| PackError::FewShot(e.to_string()))?
        } else {
            Vec::new()
        };
        Self::new(
            read("skeleton.txt")?,
            read("child_body.txt")?,
            read("validation_tests.txt")?,
            read("critique_and_revise.txt")?,
            few_shot,
        )
    }

    pub fn template(&self, t: Template) -> &str {
        match t {
            Template::Skeleton => &self.skeleton,
            Template::ChildBody => &self.child_body,
            Template::ValidationTests => &self.validation_tests,
            Template::CritiqueAndRevise => &self.critique_and_revise,
        }
    }

    pub fn few_shot(&self) -> &[FewShotExample] {
        &self.few_shot
    }

    /// sha256 over every template and the few-shot examples.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for t in Template::ALL {
            h.update(t.as_str().as_bytes());
            h.update([0]);
            h.update(self.template(t).as_bytes());
            h.update([0]);
        }
        h.update(serde_json::to_vec(&self.few_shot).expect("few-shot examples serialize"));
        hex::encode(h.finalize())
    }

    /// Substitutes slots in one pass; inserted values are never rescanned.
    pub fn render(&self, t: Template, slots: &Slots<'_>) -> String {
        let template = self.template(t);
        let places = placeholders(t, template).expect("validated at construction");
        let mut out = String::with_capacity(template.len() * 2);
        let mut cursor = 0;
        for (start, end, slot) in places {
            out.push_str(&template[cursor..start]);
            out.push_str(&self.slot_value(t, slot, slots));
            cursor = end;
        }
        out.push_str(&template[cursor..]);
        out
    }

    fn slot_value(&self, t: Template, slot: &str, s: &Slots<'_>) -> String {
        match slot {
            "docstring" => s.spec.map(|x| x.docstring.clone()).unwrap_or_default(),
            "signature" => s.spec.map(|x| x.signature.clone()).unwrap_or_default(),
            "tests" => match s.spec {
                Some(x) if !x.validation_tests.is_empty() => x.validation_tests.join("\n"),
                _ => "(none)".to_string(),
            },
            "latest_code" => s.latest_code.unwrap_or_default().to_string(),
            "test_report" => s.report.map(TestReport::render).unwrap_or_default(),
            "upper_observation" => match s.observation {
                Some(o) => format!(
                    "Your parent function was revised.\nParent feedback:\n{}\n\nParent code before:\n```python\n{}\n```\n\nParent code after:\n```python\n{}\n```",
                    o.feedback.trim(),
                    o.code_before,
                    o.code_after
                ),
                None => "No observation from a parent agent.".to_string(),
            },
            "few_shot" => self
                .few_shot
                .iter()
                .filter(|e| e.template == t)
                .map(|e| format!("Example request:\n{}\n\nExample response:\n{}", e.request.trim_end(), e.response.trim_end()))
                .collect::<Vec<_>>()
                .join("\n\n"),
            "n_tests" => s.n_tests.unwrap_or(1).to_string(),
            _ => unreachable!("slot names are validated"),
        }
    }
}

/// Finds `{{slot}}` placeholders as (start, end, name).
fn placeholders(t: Template, template: &str) -> Result<Vec<(usize, usize, &'static str)>, PackError> {
    let mut out = Vec::new();
    let mut from = 0;
    while let Some(rel) = template[from..].find("{{") {
        let start = from + rel;
        let close = template[start + 2..].find("}}").ok_or(PackError::Unclosed {
            template: t,
            offset: start,
        })?;
        let end = start + 2 + close + 2;
        let name = template[start + 2..end - 2].trim();
        let slot = SLOTS
            .iter()
            .find(|s| **s == name)
            .ok_or_else(|| PackError::UnknownSlot {
                template: t,
                slot: name.to_string(),
            })?;
        out.push((start, end, *slot));
        from = end;
    }
    Ok(out)
}
