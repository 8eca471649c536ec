use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::python::{self, TokenKind};

/// The unit of delegation: one function to implement, described by its
/// header line, docstring, and validation tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub name: String,
    /// The `def` line, e.g. `def get_odd_numbers(numbers: list) -> list:`.
    pub signature: String,
    pub docstring: String,
    /// Self-contained statement blocks, typically one `assert` each.
    #[serde(default)]
    pub validation_tests: Vec<String>,
}

impl FunctionSpec {
    pub fn new(
        name: impl Into<String>,
        signature: impl Into<String>,
        docstring: impl Into<String>,
        validation_tests: Vec<String>,
    ) -> Result<Self> {
        let spec = Self {
            name: name.into(),
            signature: signature.into(),
            docstring: docstring.into(),
            validation_tests,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn invalid(&self, reason: impl Into<String>) -> CoreError {
        CoreError::InvalidSpec {
            name: self.name.clone(),
            reason: reason.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !python::is_identifier(&self.name) || python::lexer::KEYWORDS.contains(&self.name.as_str()) {
            return Err(self.invalid("name is not a valid identifier"));
        }
        if self.docstring.trim().is_empty() {
            return Err(self.invalid("docstring is empty"));
        }
        if self.defined_name().as_deref() != Some(self.name.as_str()) {
            return Err(self.invalid(format!(
                "signature `{}` does not define `{}`",
                self.signature, self.name
            )));
        }
        for test in &self.validation_tests {
            if !self.test_mentions_name(test) {
                return Err(self.invalid(format!("validation test does not reference it: {test}")));
            }
        }
        Ok(())
    }

    /// The name introduced by the signature's `def`, if it parses.
    fn defined_name(&self) -> Option<String> {
        let tokens = python::tokenize(&self.signature).ok()?;
        let src = self.signature.as_str();
        let mut it = tokens
            .iter()
            .filter(|t| t.kind.is_significant())
            .skip_while(|t| t.is_name(src, "async"));
        let def = it.next()?;
        let name = it.next()?;
        (def.is_name(src, "def") && name.kind == TokenKind::Name).then(|| name.text(src).to_string())
    }

    /// Whether `test` references this spec's function name as an identifier.
    pub fn test_mentions_name(&self, test: &str) -> bool {
        python::references_name(test, &self.name).unwrap_or(false)
    }

    /// Renders the spec as a stub definition: signature plus docstring.
    pub fn stub(&self) -> String {
        let indent = "    ";
        let doc = self
            .docstring
            .lines()
            .enumerate()
            .map(|(i, l)| {
                if i == 0 || l.is_empty() {
                    l.to_string()
                } else {
                    format!("{indent}{l}")
                }
            })
            .collect::<Vec<_>>()
            .join("\n");
        let doc = doc.replace('\\', "\\\\").replace("\"\"\"", "\\\"\\\"\\\"");
        if self.docstring.contains('\n') {
            format!("{}\n{indent}\"\"\"{doc}\n{indent}\"\"\"", self.signature)
        } else {
            format!("{}\n{indent}\"\"\"{doc}\"\"\"", self.signature)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd() -> FunctionSpec {
        FunctionSpec::new(
            "get_odd_numbers",
            "def get_odd_numbers(numbers: list) -> list:",
            "Return the odd numbers in the list.",
            vec!["assert get_odd_numbers([1, 2, 3]) == [1, 3]".into()],
        )
        .unwrap()
    }

    #[test]
    fn accepts_valid_spec() {
        odd();
        FunctionSpec::new("f", "async def f(x):", "doc", vec![]).unwrap();
    }

    #[test]
    fn rejects_bad_name() {
        let err = FunctionSpec::new("9f", "def 9f():", "doc", vec![]).unwrap_err();
        assert!(matches!(err, CoreError::InvalidSpec { .. }));
        assert!(FunctionSpec::new("class", "def class():", "doc", vec![]).is_err());
    }

    #[test]
    fn rejects_signature_mismatch() {
        assert!(FunctionSpec::new("f", "def g(x):", "doc", vec![]).is_err());
    }

    #[test]
    fn rejects_empty_docstring() {
        assert!(FunctionSpec::new("f", "def f(x):", "  ", vec![]).is_err());
    }

    #[test]
    fn rejects_test_without_name() {
        let err = FunctionSpec::new("f", "def f(x):", "doc", vec!["assert g(1) == 1".into()]);
        assert!(err.is_err());
        // A string mention is not a reference.
        let err = FunctionSpec::new("f", "def f(x):", "doc", vec!["assert 'f' == 'f'".into()]);
        assert!(err.is_err());
    }

    #[test]
    fn stub_round_trips_through_parser() {
        let spec = FunctionSpec::new("f", "def f(x: int) -> int:", "Double x.\n\n>>> f(2)\n4", vec![]).unwrap();
        let defs = python::function_defs(&spec.stub()).unwrap();
        assert_eq!(defs[0].name, "f");
        assert!(defs[0].is_stub);
        assert_eq!(defs[0].docstring.as_deref(), Some(spec.docstring.as_str()));
        let defs = python::function_defs(&odd().stub()).unwrap();
        assert_eq!(
            defs[0].docstring.as_deref(),
            Some("Return the odd numbers in the list.")
        );
    }
}
