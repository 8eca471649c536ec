use soa_core::python::{self, LexError, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot strip source: {0}")]
pub struct StripError(pub LexError);

struct Edit {
    start: usize,
    end: usize,
    replacement: &'static str,
}

/// Removes comments and docstrings. A docstring that is the only statement
/// of a function or class body becomes `pass`. Lines left blank by a
/// removal are dropped; everything else is preserved byte for byte.
///
/// Removing a docstring can move another string statement into docstring
/// position, so passes repeat until nothing changes.
pub fn strip_code(src: &str) -> Result<String, StripError> {
    let mut current = strip_once(src)?;
    loop {
        let next = strip_once(&current)?;
        if next == current {
            return Ok(current);
        }
        current = next;
    }
}

fn strip_once(src: &str) -> Result<String, StripError> {
    let tokens = python::tokenize(src).map_err(StripError)?;
    let mut edits = Vec::new();
    for t in &tokens {
        if t.kind == TokenKind::Comment {
            let line_start = src[..t.start].rfind('\n').map_or(0, |i| i + 1);
            let lead = src[line_start..t.start].trim_end_matches([' ', '\t', '\x0c']).len();
            edits.push(Edit {
                start: line_start + lead,
                end: t.end,
                replacement: "",
            });
        }
    }
    for doc in python::docstrings(&tokens, src) {
        let s = doc.statement;
        if doc.sole_in_block {
            edits.push(Edit {
                start: s.start,
                end: s.end,
                replacement: "pass",
            });
            continue;
        }
        let term = &tokens[s.terminator];
        let mut end = s.end;
        if term.is_op(src, ";") {
            end = term.end;
            end += src[end..].len() - src[end..].trim_start_matches([' ', '\t']).len();
        }
        edits.push(Edit {
            start: s.start,
            end,
            replacement: "",
        });
    }
    edits.sort_by_key(|e| e.start);

    let mut out = String::with_capacity(src.len());
    let mut touched = Vec::new();
    let mut cursor = 0;
    for e in edits {
        if e.start < cursor {
            continue;
        }
        out.push_str(&src[cursor..e.start]);
        touched.push(out.matches('\n').count());
        out.push_str(e.replacement);
        cursor = e.end;
    }
    out.push_str(&src[cursor..]);

    let lines: Vec<&str> = out.split('\n').collect();
    let mut keep = vec![true; lines.len()];
    for i in touched {
        if lines[i].trim().is_empty() {
            keep[i] = false;
        }
    }
    // A dropped last line takes the preceding newline with it.
    let kept: Vec<&str> = lines.iter().zip(&keep).filter(|(_, k)| **k).map(|(l, _)| *l).collect();
    Ok(kept.join("\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_example() {
        let src = "def f():\n    \"\"\"doc\"\"\"\n    return 1  # note";
        assert_eq!(strip_code(src).unwrap(), "def f():\n    return 1");
    }

    #[test]
    fn clean_source_unchanged() {
        let src = "import os\n\ndef f(x):\n    return os.path.join(x, 'y')\n";
        assert_eq!(strip_code(src).unwrap(), src);
    }

    #[test]
    fn assigned_string_kept() {
        let src = "def f():\n    s = \"\"\"not a doc\"\"\"\n    return s\n";
        assert_eq!(strip_code(src).unwrap(), src);
        let src = "x = 1\n\"\"\"late string\"\"\"\n";
        assert_eq!(strip_code(src).unwrap(), src);
    }

    #[test]
    fn sole_docstring_becomes_pass() {
        assert_eq!(
            strip_code("class A:\n    \"\"\"Doc\n    more\"\"\"\n").unwrap(),
            "class A:\n    pass\n"
        );
        assert_eq!(strip_code("def f(): 'doc'\n").unwrap(), "def f(): pass\n");
    }

    #[test]
    fn semicolon_forms() {
        assert_eq!(strip_code("def f(): 'doc'; return 1\n").unwrap(), "def f(): return 1\n");
        assert_eq!(
            strip_code("def f():\n    'doc'; x = 1\n    return x\n").unwrap(),
            "def f():\n    x = 1\n    return x\n"
        );
    }

    #[test]
    fn comment_lines_and_eof() {
        assert_eq!(strip_code("# header\nx = 1\n# end").unwrap(), "x = 1");
        assert_eq!(
            strip_code("x = [1,  # one\n     # two\n     2]\n").unwrap(),
            "x = [1,\n     2]\n"
        );
        assert_eq!(strip_code("\"\"\"Module.\"\"\"\n\nx = 1\n").unwrap(), "\nx = 1\n");
    }

    #[test]
    fn consecutive_leading_strings() {
        assert_eq!(strip_code("'a'\n'b'\nx = 1\n").unwrap(), "x = 1\n");
        assert_eq!(strip_code("def f(): 'a'; 'b'\n").unwrap(), "def f(): pass\n");
    }

    #[test]
    fn hash_inside_string_is_not_comment() {
        let src = "s = '# not a comment'\n";
        assert_eq!(strip_code(src).unwrap(), src);
    }
}
