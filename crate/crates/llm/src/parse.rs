//! Response parsing: fenced blocks and the per-template response formats.

use std::fmt;

use soa_core::python::{self, StatementKind};
use soa_core::FunctionSpec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the response, when the failure has a location.
    pub offset: Option<usize>,
    pub message: String,
    /// Items that did parse, for errors about missing quantity.
    pub partial: Vec<String>,
}

impl ParseError {
    fn new(message: impl Into<String>) -> Self {
        Self {
            offset: None,
            message: message.into(),
            partial: Vec::new(),
        }
    }

    fn at(offset: usize, message: impl Into<String>) -> Self {
        Self {
            offset: Some(offset),
            ..Self::new(message)
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.offset {
            Some(o) => write!(f, "{} (at byte {o})", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeBlock {
    /// Info string after the opening fence, trimmed; empty if absent.
    pub label: String,
    pub body: String,
    /// Byte offset of the opening fence.
    pub offset: usize,
}

/// Extracts every ```-fenced block in document order. A fence must start
/// its line (leading whitespace allowed). Bodies are byte-exact, minus the
/// newline before the closing fence.
pub fn parse_code_blocks(text: &str) -> Result<Vec<CodeBlock>, ParseError> {
    let mut blocks = Vec::new();
    let mut open: Option<(usize, String, usize)> = None;
    let mut pos = 0;
    for line in text.split_inclusive('\n') {
        let start = pos;
        pos += line.len();
        let trimmed = line.trim_start();
        if !trimmed.starts_with("```") {
            continue;
        }
        let info = trimmed[3..].trim();
        match open.take() {
            None => {
                let label = info.split_whitespace().next().unwrap_or("").to_string();
                open = Some((start, label, pos));
            }
            Some((offset, label, body_start)) => {
                if !info.is_empty() {
                    // A labeled fence cannot close a block; treat it as content.
                    open = Some((offset, label, body_start));
                    continue;
                }
                let body = &text[body_start.min(start)..start];
                let body = body.strip_suffix('\n').unwrap_or(body);
                let body = body.strip_suffix('\r').unwrap_or(body);
                blocks.push(CodeBlock {
                    label,
                    body: body.to_string(),
                    offset,
                });
            }
        }
    }
    if let Some((offset, _, _)) = open {
        return Err(ParseError::at(offset, "unterminated code fence"));
    }
    Ok(blocks)
}

/// Validates a code block that must define exactly the function `name`.
/// Imports and other module-level statements are kept; top-level asserts
/// and `if __name__ == "__main__":` blocks are dropped.
pub fn extract_function(code: &str, name: &str, offset: usize) -> Result<String, ParseError> {
    let statements = python::top_level_statements(code)
        .map_err(|e| ParseError::at(offset + e.offset, format!("code does not tokenize: {}", e.message)))?;
    let mut defined = Vec::new();
    let mut kept = Vec::new();
    for s in &statements {
        let text = s.text(code);
        match s.kind {
            StatementKind::Def | StatementKind::Class => {
                defined.push(s.name.clone().unwrap_or_default());
                kept.push(text);
            }
            StatementKind::Assert => {}
            StatementKind::Other if is_main_guard(text) => {}
            _ => kept.push(text),
        }
    }
    match defined.as_slice() {
        [only] if only == name => Ok(kept.join("\n")),
        [] => Err(ParseError::at(offset, format!("code block does not define `{name}`"))),
        [only] => Err(ParseError::at(
            offset,
            format!("code block defines `{only}` instead of `{name}`"),
        )),
        many => Err(ParseError::at(
            offset,
            format!("code block must define only `{name}`, found: {}", many.join(", ")),
        )),
    }
}

fn is_main_guard(text: &str) -> bool {
    let head: String = text.lines().next().unwrap_or("").split_whitespace().collect();
    head.starts_with("if__name__==") && head.contains("__main__")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub host_code: String,
    pub subtasks: Vec<FunctionSpec>,
    pub warnings: Vec<String>,
}

/// Parses a skeleton response: one `host` block, then `subtask` blocks
/// holding a stub plus top-level asserts. Without labels, the first block
/// is the host and the rest are subtasks.
pub fn parse_skeleton(text: &str, spec: &FunctionSpec) -> Result<Skeleton, ParseError> {
    let blocks = parse_code_blocks(text)?;
    let labeled = blocks.iter().any(|b| b.label == "host" || b.label == "subtask");
    let (host, subtask_blocks): (Option<&CodeBlock>, Vec<&CodeBlock>) = if labeled {
        (
            blocks.iter().find(|b| b.label == "host"),
            blocks.iter().filter(|b| b.label == "subtask").collect(),
        )
    } else {
        (blocks.first(), blocks.iter().skip(1).collect())
    };
    let host = host.ok_or_else(|| ParseError::new("response has no host code block"))?;
    let host_code = extract_function(&host.body, &spec.name, host.offset)?;

    let mut warnings = Vec::new();
    let mut subtasks: Vec<FunctionSpec> = Vec::new();
    for block in subtask_blocks {
        let sub = parse_subtask(block, &mut warnings)?;
        if sub.name == spec.name {
            return Err(ParseError::at(
                block.offset,
                format!("subtask `{}` has the host function's name", sub.name),
            ));
        }
        if subtasks.iter().any(|s| s.name == sub.name) {
            return Err(ParseError::at(
                block.offset,
                format!("subtask `{}` is declared twice", sub.name),
            ));
        }
        subtasks.push(sub);
    }
    for sub in &subtasks {
        if !python::references_name(&host_code, &sub.name).unwrap_or(false) {
            warnings.push(format!("subtask `{}` is never called by the host", sub.name));
        }
    }
    Ok(Skeleton {
        host_code,
        subtasks,
        warnings,
    })
}

fn parse_subtask(block: &CodeBlock, warnings: &mut Vec<String>) -> Result<FunctionSpec, ParseError> {
    let fail = |msg: String| ParseError::at(block.offset, msg);
    let defs = python::function_defs(&block.body)
        .map_err(|e| fail(format!("subtask block does not tokenize: {}", e.message)))?;
    let stub = defs
        .first()
        .ok_or_else(|| fail("subtask block has no function stub".into()))?;
    let docstring = stub
        .docstring
        .clone()
        .filter(|d| !d.trim().is_empty())
        .ok_or_else(|| fail(format!("subtask `{}` has no docstring", stub.name)))?;
    if !stub.is_stub {
        warnings.push(format!(
            "subtask `{}` came with an implementation; only its signature and docstring are kept",
            stub.name
        ));
    }
    let asserts = python::top_level_asserts(&block.body)
        .map_err(|e| fail(format!("subtask block does not tokenize: {}", e.message)))?;
    let mut tests = Vec::new();
    for test in asserts {
        if python::references_name(&test, &stub.name).unwrap_or(false) {
            tests.push(test);
        } else {
            warnings.push(format!("dropped test not referencing `{}`: {test}", stub.name));
        }
    }
    FunctionSpec::new(stub.name.clone(), stub.signature.clone(), docstring, tests).map_err(|e| fail(e.to_string()))
}

/// Parses a function-body response: the first fenced block must define
/// exactly `spec.name`.
pub fn parse_body(text: &str, spec: &FunctionSpec) -> Result<String, ParseError> {
    let blocks = parse_code_blocks(text)?;
    let block = blocks
        .first()
        .ok_or_else(|| ParseError::new("response has no code block"))?;
    extract_function(&block.body, &spec.name, block.offset)
}

/// Parses a revision response: a `FEEDBACK:` line with free text, then one
/// fenced block with the revised function.
pub fn parse_revision(text: &str, spec: &FunctionSpec) -> Result<(String, String), ParseError> {
    let marker = find_feedback_marker(text).ok_or_else(|| ParseError::new("response has no FEEDBACK: section"))?;
    let after = &text[marker..];
    let blocks = parse_code_blocks(after).map_err(|mut e| {
        e.offset = e.offset.map(|o| o + marker);
        e
    })?;
    let block = blocks
        .first()
        .ok_or_else(|| ParseError::at(marker, "no code block after FEEDBACK:"))?;
    let feedback = after["FEEDBACK:".len()..block.offset].trim().to_string();
    if feedback.is_empty() {
        return Err(ParseError::at(marker, "FEEDBACK: section is empty"));
    }
    let code = extract_function(&block.body, &spec.name, marker + block.offset)?;
    Ok((feedback, code))
}

fn find_feedback_marker(text: &str) -> Option<usize> {
    let mut pos = 0;
    for line in text.split_inclusive('\n') {
        let indent = line.len() - line.trim_start().len();
        if line.trim_start().starts_with("FEEDBACK:") {
            return Some(pos + indent);
        }
        pos += line.len();
    }
    None
}

/// Collects distinct top-level asserts referencing `spec.name`, from fenced
/// blocks or, when there are none, from `assert` lines in the raw text.
pub fn parse_validation_tests(text: &str, spec: &FunctionSpec, n: usize) -> Result<Vec<String>, ParseError> {
    let blocks = parse_code_blocks(text)?;
    let mut candidates = Vec::new();
    if blocks.is_empty() {
        for line in text.lines() {
            let line = line.trim();
            if line.starts_with("assert ") && python::tokenize(line).is_ok() {
                candidates.push(line.to_string());
            }
        }
    } else {
        for block in &blocks {
            let asserts = python::top_level_asserts(&block.body)
                .map_err(|e| ParseError::at(block.offset, format!("test block does not tokenize: {}", e.message)))?;
            candidates.extend(asserts);
        }
    }
    let mut tests: Vec<String> = Vec::new();
    for test in candidates {
        if spec.test_mentions_name(&test) && !tests.contains(&test) {
            tests.push(test);
        }
    }
    if tests.len() < n {
        return Err(ParseError {
            offset: None,
            message: format!(
                "expected at least {n} assert statements referencing `{}`, found {}",
                spec.name,
                tests.len()
            ),
            partial: tests,
        });
    }
    Ok(tests)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_examples() {
        let b = parse_code_blocks("```host\nX\n```").unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!((b[0].label.as_str(), b[0].body.as_str()), ("host", "X"));
        assert!(parse_code_blocks("no fences here").unwrap().is_empty());
        let two = parse_code_blocks("a\n```python\n1\n```\nb\n```\n2\n\n```\n").unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].body, "1");
        assert_eq!(two[1].body, "2\n");
        assert_eq!(two[1].label, "");
    }

    #[test]
    fn unterminated_fence_reports_offset() {
        let err = parse_code_blocks("ok\n```py\nx = 1\n").unwrap_err();
        assert_eq!(err.offset, Some(3));
    }

    #[test]
    fn empty_body() {
        let b = parse_code_blocks("```\n```\n").unwrap();
        assert_eq!(b[0].body, "");
    }

    #[test]
    fn extract_keeps_imports_drops_asserts() {
        let code = "import math\n\ndef f(x):\n    return math.sqrt(x)\n\nassert f(4) == 2\nif __name__ == '__main__':\n    print(f(9))";
        let out = extract_function(code, "f", 0).unwrap();
        assert_eq!(out, "import math\ndef f(x):\n    return math.sqrt(x)");
        assert!(extract_function("def g():\n    pass", "f", 0).is_err());
        assert!(extract_function("def f():\n    pass\ndef h():\n    pass", "f", 0).is_err());
    }

    #[test]
    fn revision_requires_marker() {
        let spec = FunctionSpec::new("f", "def f():", "doc", vec![]).unwrap();
        let ok = "Some intro\nFEEDBACK: return two.\nReasons.\n```python\ndef f():\n    return 2\n```";
        let (fb, code) = parse_revision(ok, &spec).unwrap();
        assert_eq!(fb, "return two.\nReasons.");
        assert_eq!(code, "def f():\n    return 2");
        assert!(parse_revision("```python\ndef f():\n    return 2\n```", &spec).is_err());
        assert!(parse_revision("FEEDBACK:\n```python\ndef f():\n    return 2\n```", &spec).is_err());
        assert!(parse_revision("FEEDBACK: fine", &spec).is_err());
    }
}
