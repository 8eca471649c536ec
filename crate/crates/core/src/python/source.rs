//! Structural queries over Python source built on the token stream.

use super::lexer::{tokenize, LexError, Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatementKind {
    Def,
    Class,
    Import,
    Assert,
    Other,
}

/// A statement that begins at indentation level zero, together with any
/// indented body and leading decorators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopLevelStatement {
    pub kind: StatementKind,
    /// Defined name for `def` and `class` statements.
    pub name: Option<String>,
    /// Byte range of the statement text, excluding the terminating newline.
    pub start: usize,
    pub end: usize,
}

impl TopLevelStatement {
    pub fn text<'a>(&self, src: &'a str) -> &'a str {
        &src[self.start..self.end]
    }
}

/// A function definition located in a source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: String,
    /// Header text from `def` (or `async`) up to and including the colon.
    pub signature: String,
    /// Cleaned docstring, if the body starts with one.
    pub docstring: Option<String>,
    /// The body holds nothing but a docstring and optionally `pass` / `...`.
    pub is_stub: bool,
    pub start: usize,
    pub end: usize,
}

/// Splits a module into its top-level statements.
pub fn top_level_statements(src: &str) -> Result<Vec<TopLevelStatement>, LexError> {
    let tokens = tokenize(src)?;
    let mut out: Vec<TopLevelStatement> = Vec::new();
    let mut depth = 0i32;
    let mut i = 0;
    let mut pending_decorator_start: Option<usize> = None;
    while i < tokens.len() {
        let tok = tokens[i];
        match tok.kind {
            TokenKind::Indent => depth += 1,
            TokenKind::Dedent => depth -= 1,
            TokenKind::Comment | TokenKind::Nl | TokenKind::Newline | TokenKind::EndMarker => {}
            _ if depth == 0 => {
                // Start of a top-level logical line.
                let line_end = logical_line_end(&tokens, i);
                let first = tok.text(src);
                if first == "@" && tok.kind == TokenKind::Op {
                    pending_decorator_start.get_or_insert(tok.start);
                    i = line_end + 1;
                    continue;
                }
                let mut j = i;
                if tokens[j].is_name(src, "async") {
                    j += 1;
                }
                let (kind, name) = match tokens[j].text(src) {
                    "def" if tokens[j].kind == TokenKind::Name => {
                        (StatementKind::Def, tokens.get(j + 1).map(|t| t.text(src).to_string()))
                    }
                    "class" if tokens[j].kind == TokenKind::Name => {
                        (StatementKind::Class, tokens.get(j + 1).map(|t| t.text(src).to_string()))
                    }
                    "import" | "from" if tokens[j].kind == TokenKind::Name => (StatementKind::Import, None),
                    "assert" if tokens[j].kind == TokenKind::Name => (StatementKind::Assert, None),
                    _ => (StatementKind::Other, None),
                };
                // Extend over an indented body, if any.
                let mut last_newline = line_end;
                let mut next = line_end + 1;
                let mut p = next;
                while p < tokens.len() && matches!(tokens[p].kind, TokenKind::Comment | TokenKind::Nl) {
                    p += 1;
                }
                if p < tokens.len() && tokens[p].kind == TokenKind::Indent {
                    let mut body_depth = 0i32;
                    let mut k = p;
                    while k < tokens.len() {
                        match tokens[k].kind {
                            TokenKind::Indent => body_depth += 1,
                            TokenKind::Dedent => {
                                body_depth -= 1;
                                if body_depth == 0 {
                                    break;
                                }
                            }
                            TokenKind::Newline => last_newline = k,
                            _ => {}
                        }
                        k += 1;
                    }
                    next = k + 1;
                }
                let start = pending_decorator_start.take().unwrap_or(tok.start);
                let end = tokens[..last_newline]
                    .iter()
                    .rev()
                    .find(|t| t.kind.is_significant())
                    .map_or(tokens[last_newline].start, |t| t.end);
                out.push(TopLevelStatement { kind, name, start, end });
                i = next;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    Ok(out)
}

/// Index of the `Newline` token that terminates the logical line containing
/// token `i`.
fn logical_line_end(tokens: &[Token], i: usize) -> usize {
    let mut j = i;
    while j < tokens.len() && tokens[j].kind != TokenKind::Newline {
        j += 1;
    }
    j.min(tokens.len() - 1)
}

/// All top-level function definitions, in source order.
pub fn function_defs(src: &str) -> Result<Vec<FunctionDef>, LexError> {
    let tokens = tokenize(src)?;
    let statements = top_level_statements(src)?;
    let mut defs = Vec::new();
    for stmt in statements.iter().filter(|s| s.kind == StatementKind::Def) {
        let Some(def_idx) = tokens
            .iter()
            .position(|t| t.start >= stmt.start && t.is_name(src, "def"))
        else {
            continue;
        };
        let header_start = if def_idx > 0 && tokens[def_idx - 1].is_name(src, "async") {
            tokens[def_idx - 1].start
        } else {
            tokens[def_idx].start
        };
        let Some(colon) = header_colon(&tokens, src, def_idx) else {
            continue;
        };
        let name = tokens[def_idx + 1].text(src).to_string();
        let signature = src[header_start..tokens[colon].end].to_string();
        let body = body_statements(&tokens, src, colon);
        let docstring = body
            .first()
            .filter(|s| s.is_docstring)
            .and_then(|s| s.string_value(src));
        let is_stub = body.first().is_some_and(|s| s.is_docstring)
            && body[1..].iter().all(|s| matches!(s.text(src).trim(), "pass" | "..."));
        defs.push(FunctionDef {
            name,
            signature,
            docstring,
            is_stub,
            start: stmt.start,
            end: stmt.end,
        });
    }
    Ok(defs)
}

/// Index of the colon that ends the header of the `def`/`class` at `kw`.
pub fn header_colon(tokens: &[Token], src: &str, kw: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (j, t) in tokens.iter().enumerate().skip(kw + 1) {
        if t.kind == TokenKind::Op {
            match t.text(src) {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => depth -= 1,
                ":" if depth == 0 => return Some(j),
                _ => {}
            }
        }
        if t.kind == TokenKind::Newline {
            return None;
        }
    }
    None
}

/// A simple statement within a block body.
#[derive(Debug, Clone, Copy)]
pub struct BodyStatement {
    /// Token index of the first token.
    pub first: usize,
    /// Token index of the last significant token.
    pub last: usize,
    /// Token index of the terminator (`Newline` or `;`).
    pub terminator: usize,
    pub is_docstring: bool,
    pub start: usize,
    pub end: usize,
}

impl BodyStatement {
    pub fn text<'a>(&self, src: &'a str) -> &'a str {
        &src[self.start..self.end]
    }

    fn string_value(&self, src: &str) -> Option<String> {
        if !self.is_docstring {
            return None;
        }
        Some(clean_docstring(&decode_string_literals(&src[self.start..self.end])))
    }
}

/// The statements directly inside the block whose header ends at `colon`.
/// Compound statements are reported by their first logical line only.
pub fn body_statements(tokens: &[Token], src: &str, colon: usize) -> Vec<BodyStatement> {
    let mut out = Vec::new();
    let mut i = colon + 1;
    let same_line = tokens
        .get(i)
        .map(|t| t.kind != TokenKind::Newline && t.kind != TokenKind::Comment)
        .unwrap_or(false);
    if same_line {
        // Simple suite: `def f(): a; b`.
        while i < tokens.len() {
            let stmt = simple_statement(tokens, src, i);
            let term = stmt.terminator;
            out.push(stmt);
            if tokens[term].kind == TokenKind::Newline {
                break;
            }
            i = term + 1;
            if tokens.get(i).map(|t| t.kind) == Some(TokenKind::Newline) {
                break;
            }
        }
        return out;
    }
    // Indented block: skip to the Indent.
    while i < tokens.len() && tokens[i].kind != TokenKind::Indent {
        i += 1;
    }
    i += 1;
    let mut depth = 0i32;
    while i < tokens.len() {
        match tokens[i].kind {
            TokenKind::Indent => {
                depth += 1;
                i += 1;
            }
            TokenKind::Dedent => {
                if depth == 0 {
                    break;
                }
                depth -= 1;
                i += 1;
            }
            TokenKind::Comment | TokenKind::Nl | TokenKind::Newline => i += 1,
            TokenKind::EndMarker => break,
            _ if depth == 0 => {
                let stmt = simple_statement(tokens, src, i);
                out.push(stmt);
                i = stmt.terminator + 1;
            }
            _ => i += 1,
        }
    }
    out
}

/// The simple statement starting at token `first`, terminated by a
/// top-level `;` or the end of the logical line.
pub fn simple_statement(tokens: &[Token], src: &str, first: usize) -> BodyStatement {
    let mut depth = 0i32;
    let mut j = first;
    let mut last = first;
    let mut all_strings = true;
    let mut saw_string = false;
    let mut compound = false;
    while j < tokens.len() {
        let t = tokens[j];
        match t.kind {
            TokenKind::Newline | TokenKind::EndMarker => break,
            TokenKind::Op if depth == 0 && t.text(src) == ";" => break,
            TokenKind::Op => {
                match t.text(src) {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => depth -= 1,
                    ":" if depth == 0 => compound = true,
                    _ => {}
                }
                if !matches!(t.text(src), "(" | ")") {
                    all_strings = false;
                }
                last = j;
            }
            TokenKind::String => {
                let prefix: String = t
                    .text(src)
                    .chars()
                    .take_while(|c| c.is_ascii_alphabetic())
                    .collect::<String>()
                    .to_ascii_lowercase();
                if prefix.contains('f') || prefix.contains('b') {
                    all_strings = false;
                }
                saw_string = true;
                last = j;
            }
            TokenKind::Comment | TokenKind::Nl => {}
            _ => {
                all_strings = false;
                last = j;
            }
        }
        j += 1;
        if compound {
            // A compound statement header; its body belongs to it.
            all_strings = false;
        }
    }
    BodyStatement {
        first,
        last,
        terminator: j.min(tokens.len() - 1),
        is_docstring: all_strings && saw_string,
        start: tokens[first].start,
        end: tokens[last].end,
    }
}

/// A docstring statement: a string-only expression in the first statement
/// position of a module, function, or class body.
#[derive(Debug, Clone, Copy)]
pub struct Docstring {
    pub statement: BodyStatement,
    /// The docstring is the only statement of a function or class body, so
    /// removing it would leave the block empty.
    pub sole_in_block: bool,
}

/// Locates every docstring in a tokenized module, in source order.
pub fn docstrings(tokens: &[Token], src: &str) -> Vec<Docstring> {
    let mut out = Vec::new();
    if let Some(first) = tokens
        .iter()
        .position(|t| !matches!(t.kind, TokenKind::Comment | TokenKind::Nl))
    {
        if tokens[first].kind.is_significant() {
            let stmt = simple_statement(tokens, src, first);
            if stmt.is_docstring {
                out.push(Docstring {
                    statement: stmt,
                    sole_in_block: false,
                });
            }
        }
    }
    for (i, t) in tokens.iter().enumerate() {
        if !(t.is_name(src, "def") || t.is_name(src, "class")) {
            continue;
        }
        let Some(colon) = header_colon(tokens, src, i) else {
            continue;
        };
        let body = body_statements(tokens, src, colon);
        if let Some(first) = body.first().filter(|s| s.is_docstring) {
            out.push(Docstring {
                statement: *first,
                sole_in_block: body.len() == 1,
            });
        }
    }
    out.sort_by_key(|d| d.statement.start);
    out
}

/// Top-level `assert` statements, as source text.
pub fn top_level_asserts(src: &str) -> Result<Vec<String>, LexError> {
    Ok(top_level_statements(src)?
        .into_iter()
        .filter(|s| s.kind == StatementKind::Assert)
        .map(|s| s.text(src).trim_end().to_string())
        .collect())
}

/// Whether `name` appears as an identifier (not an attribute) in `src`,
/// other than as the name being defined by a `def`/`class`.
pub fn references_name(src: &str, name: &str) -> Result<bool, LexError> {
    let tokens = tokenize(src)?;
    Ok(tokens.iter().enumerate().any(|(i, t)| {
        t.is_name(src, name)
            && !(i > 0
                && (tokens[i - 1].is_op(src, ".")
                    || tokens[i - 1].is_name(src, "def")
                    || tokens[i - 1].is_name(src, "class")))
    }))
}

/// Replaces every identifier token `old` with `new`, skipping attribute
/// accesses (`x.old`). Strings and comments are left untouched. Returns the
/// rewritten source and the number of replacements.
pub fn rename_identifier(src: &str, old: &str, new: &str) -> Result<(String, usize), LexError> {
    let tokens = tokenize(src)?;
    let mut out = String::with_capacity(src.len());
    let mut cursor = 0;
    let mut count = 0;
    for (i, t) in tokens.iter().enumerate() {
        if t.is_name(src, old) && !(i > 0 && tokens[i - 1].is_op(src, ".")) {
            out.push_str(&src[cursor..t.start]);
            out.push_str(new);
            cursor = t.end;
            count += 1;
        }
    }
    out.push_str(&src[cursor..]);
    Ok((out, count))
}

/// Decodes one or more adjacent (implicitly concatenated) string literals,
/// optionally wrapped in parentheses. Escapes are processed for non-raw
/// literals; unknown escapes are kept verbatim.
pub fn decode_string_literals(text: &str) -> String {
    let Ok(tokens) = tokenize(text) else {
        return text.to_string();
    };
    tokens
        .iter()
        .filter(|t| t.kind == TokenKind::String)
        .map(|t| decode_string_literal(t.text(text)))
        .collect()
}

fn decode_string_literal(lit: &str) -> String {
    let prefix_len = lit.chars().take_while(|c| c.is_ascii_alphabetic()).count();
    let raw = lit[..prefix_len].to_ascii_lowercase().contains('r');
    let body = &lit[prefix_len..];
    let quote_len = if body.starts_with("\"\"\"") || body.starts_with("'''") {
        3
    } else {
        1
    };
    let inner = &body[quote_len..body.len() - quote_len];
    if raw {
        return inner.to_string();
    }
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars().peekable();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('r') => out.push('\r'),
            Some('\\') => out.push('\\'),
            Some('\'') => out.push('\''),
            Some('"') => out.push('"'),
            Some('0') => out.push('\0'),
            Some('\n') => {}
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

/// Normalizes docstring indentation the way `inspect.cleandoc` does.
pub fn clean_docstring(doc: &str) -> String {
    let expanded = doc.replace('\t', "        ");
    let lines: Vec<&str> = expanded.lines().collect();
    if lines.is_empty() {
        return String::new();
    }
    let margin = lines[1..]
        .iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.len() - l.trim_start().len())
        .min()
        .unwrap_or(0);
    let mut cleaned: Vec<String> = Vec::with_capacity(lines.len());
    cleaned.push(lines[0].trim_start().to_string());
    for l in &lines[1..] {
        cleaned.push(if l.len() >= margin {
            l[margin..].trim_end().to_string()
        } else {
            l.trim().to_string()
        });
    }
    while cleaned.first().is_some_and(|l| l.trim().is_empty()) {
        cleaned.remove(0);
    }
    while cleaned.last().is_some_and(|l| l.trim().is_empty()) {
        cleaned.pop();
    }
    cleaned.join("\n")
}
