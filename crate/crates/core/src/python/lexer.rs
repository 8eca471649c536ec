//! A tokenizer for Python source that mirrors the token classes of the
//! reference `tokenize` module closely enough for structural work: finding
//! top-level definitions, docstrings, comments, and renaming identifiers.
//!
//! Tokens carry byte offsets into the original source, so callers can edit
//! the text without re-rendering it.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Name,
    Number,
    String,
    Op,
    Comment,
    /// End of a logical line.
    Newline,
    /// Non-logical line break (blank line, comment line, or inside brackets).
    Nl,
    Indent,
    Dedent,
    EndMarker,
}

impl TokenKind {
    /// Tokens that carry program text, as opposed to layout or comments.
    pub fn is_significant(self) -> bool {
        matches!(
            self,
            TokenKind::Name | TokenKind::Number | TokenKind::String | TokenKind::Op
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Byte offset of the first byte of the token.
    pub start: usize,
    /// Byte offset one past the last byte of the token.
    pub end: usize,
    /// 1-based physical line of `start`.
    pub line: usize,
}

impl Token {
    pub fn text<'a>(&self, src: &'a str) -> &'a str {
        &src[self.start..self.end]
    }

    pub fn is_op(&self, src: &str, op: &str) -> bool {
        self.kind == TokenKind::Op && self.text(src) == op
    }

    pub fn is_name(&self, src: &str, name: &str) -> bool {
        self.kind == TokenKind::Name && self.text(src) == name
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub offset: usize,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {} (byte {}): {}", self.line, self.offset, self.message)
    }
}

impl std::error::Error for LexError {}

const OPERATORS_3: &[&str] = &["**=", "//=", ">>=", "<<=", "...", "!="];
const OPERATORS_2: &[&str] = &[
    "**", "//", ">>", "<<", "<=", ">=", "==", "!=", "->", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=", ":=",
];
const OPERATORS_1: &[u8] = b"+-*/%@&|^~<>()[]{},:;.=";

const STRING_PREFIXES: &[&str] = &["r", "u", "b", "f", "br", "rb", "fr", "rf"];

/// Tokenizes `src`. The returned stream always ends with `EndMarker`, and a
/// final `Newline` is synthesized (zero width) when the source does not end
/// with one, matching the reference tokenizer.
pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    Lexer::new(src).run()
}

enum LineStart {
    Eof,
    /// Blank or comment-only line; indentation is not significant.
    Blank,
    Code,
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    tokens: Vec<Token>,
    indents: Vec<usize>,
    brackets: Vec<(u8, usize)>,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            line: 1,
            tokens: Vec::new(),
            indents: vec![0],
            brackets: Vec::new(),
        }
    }

    fn err(&self, offset: usize, message: impl Into<String>) -> LexError {
        let line = 1 + self.bytes[..offset.min(self.bytes.len())]
            .iter()
            .filter(|b| **b == b'\n')
            .count();
        LexError {
            offset,
            line,
            message: message.into(),
        }
    }

    fn push(&mut self, kind: TokenKind, start: usize, end: usize) {
        let line = self.line;
        self.tokens.push(Token { kind, start, end, line });
    }

    fn peek(&self, ahead: usize) -> Option<u8> {
        self.bytes.get(self.pos + ahead).copied()
    }

    fn newline_len(&self, at: usize) -> usize {
        match self.bytes.get(at) {
            Some(b'\n') => 1,
            Some(b'\r') if self.bytes.get(at + 1) == Some(&b'\n') => 2,
            Some(b'\r') => 1,
            _ => 0,
        }
    }

    fn run(mut self) -> Result<Vec<Token>, LexError> {
        let mut at_line_start = true;
        loop {
            if at_line_start && self.brackets.is_empty() {
                match self.line_start()? {
                    LineStart::Eof => break,
                    LineStart::Blank => {}
                    LineStart::Code => at_line_start = false,
                }
                continue;
            }
            // Skip intra-line whitespace.
            while let Some(b) = self.peek(0) {
                if b == b' ' || b == b'\t' || b == b'\x0c' {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            let Some(b) = self.peek(0) else { break };
            let start = self.pos;
            match b {
                b'#' => {
                    self.scan_comment();
                }
                b'\n' | b'\r' => {
                    let len = self.newline_len(start);
                    let kind = if self.brackets.is_empty() {
                        at_line_start = true;
                        TokenKind::Newline
                    } else {
                        TokenKind::Nl
                    };
                    self.push(kind, start, start + len);
                    self.pos += len;
                    self.line += 1;
                }
                b'\\' => {
                    let len = self.newline_len(start + 1);
                    if len == 0 {
                        return Err(self.err(start, "unexpected character after line continuation"));
                    }
                    self.pos += 1 + len;
                    self.line += 1;
                }
                b'0'..=b'9' => self.scan_number(),
                b'.' if matches!(self.peek(1), Some(b'0'..=b'9')) => self.scan_number(),
                b'\'' | b'"' => self.scan_string(start, "")?,
                _ if is_ident_start(self.char_at(start)) => self.scan_name_or_prefixed_string()?,
                _ => self.scan_operator()?,
            }
        }
        self.finish()
    }

    fn char_at(&self, at: usize) -> char {
        self.src[at..].chars().next().unwrap_or('\0')
    }

    /// Handles indentation at the start of a logical line.
    fn line_start(&mut self) -> Result<LineStart, LexError> {
        let line_begin = self.pos;
        let mut col = 0usize;
        while let Some(b) = self.peek(0) {
            match b {
                b' ' => col += 1,
                b'\t' => col = (col / 8 + 1) * 8,
                b'\x0c' => col = 0,
                _ => break,
            }
            self.pos += 1;
        }
        match self.peek(0) {
            None => return Ok(LineStart::Eof),
            Some(b'#') => {
                self.scan_comment();
                let at = self.pos;
                let len = self.newline_len(at);
                if len > 0 {
                    self.push(TokenKind::Nl, at, at + len);
                    self.pos += len;
                    self.line += 1;
                }
                return Ok(LineStart::Blank);
            }
            Some(b'\n') | Some(b'\r') => {
                let at = self.pos;
                let len = self.newline_len(at);
                self.push(TokenKind::Nl, at, at + len);
                self.pos += len;
                self.line += 1;
                return Ok(LineStart::Blank);
            }
            Some(b'\\') => {
                // A continuation right after indentation; treat the joined
                // line as part of this logical line.
            }
            _ => {}
        }
        let top = *self.indents.last().unwrap_or(&0);
        if col > top {
            self.indents.push(col);
            self.push(TokenKind::Indent, line_begin, self.pos);
        } else if col < top {
            while col < *self.indents.last().unwrap_or(&0) {
                self.indents.pop();
                self.push(TokenKind::Dedent, self.pos, self.pos);
            }
            if col != *self.indents.last().unwrap_or(&0) {
                return Err(self.err(self.pos, "unindent does not match any outer indentation level"));
            }
        }
        Ok(LineStart::Code)
    }

    fn scan_comment(&mut self) {
        let start = self.pos;
        while let Some(b) = self.peek(0) {
            if b == b'\n' || b == b'\r' {
                break;
            }
            self.pos += 1;
        }
        self.push(TokenKind::Comment, start, self.pos);
    }

    fn scan_number(&mut self) {
        let start = self.pos;
        let is_radix =
            self.peek(0) == Some(b'0') && matches!(self.peek(1), Some(b'x' | b'X' | b'o' | b'O' | b'b' | b'B'));
        if is_radix {
            self.pos += 2;
            while matches!(self.peek(0), Some(b) if b.is_ascii_hexdigit() || b == b'_') {
                self.pos += 1;
            }
        } else {
            while matches!(self.peek(0), Some(b) if b.is_ascii_digit() || b == b'_') {
                self.pos += 1;
            }
            if self.peek(0) == Some(b'.') {
                self.pos += 1;
                while matches!(self.peek(0), Some(b) if b.is_ascii_digit() || b == b'_') {
                    self.pos += 1;
                }
            }
            if matches!(self.peek(0), Some(b'e' | b'E')) {
                let save = self.pos;
                self.pos += 1;
                if matches!(self.peek(0), Some(b'+' | b'-')) {
                    self.pos += 1;
                }
                if matches!(self.peek(0), Some(b'0'..=b'9')) {
                    while matches!(self.peek(0), Some(b) if b.is_ascii_digit() || b == b'_') {
                        self.pos += 1;
                    }
                } else {
                    self.pos = save;
                }
            }
            if matches!(self.peek(0), Some(b'j' | b'J')) {
                self.pos += 1;
            }
        }
        self.push(TokenKind::Number, start, self.pos);
    }

    fn scan_name_or_prefixed_string(&mut self) -> Result<(), LexError> {
        let start = self.pos;
        let mut end = start;
        for (i, c) in self.src[start..].char_indices() {
            if i == 0 && is_ident_start(c) || i > 0 && is_ident_continue(c) {
                end = start + i + c.len_utf8();
            } else {
                break;
            }
        }
        let word = &self.src[start..end];
        let next = self.bytes.get(end).copied();
        if matches!(next, Some(b'\'' | b'"')) && STRING_PREFIXES.contains(&word.to_ascii_lowercase().as_str()) {
            self.pos = end;
            let prefix = word.to_ascii_lowercase();
            return self.scan_string(start, &prefix);
        }
        self.pos = end;
        self.push(TokenKind::Name, start, end);
        Ok(())
    }

    /// Scans a string literal whose quotes begin at `self.pos`.
    fn scan_string(&mut self, token_start: usize, prefix: &str) -> Result<(), LexError> {
        let end = scan_string_body(self.bytes, self.pos, prefix.contains('f'))
            .map_err(|at| self.err(at.min(self.bytes.len()), "unterminated string literal"))?;
        let newlines = self.bytes[token_start..end].iter().filter(|b| **b == b'\n').count();
        self.push(TokenKind::String, token_start, end);
        self.pos = end;
        self.line += newlines;
        Ok(())
    }

    fn scan_operator(&mut self) -> Result<(), LexError> {
        let start = self.pos;
        let rest = &self.src[start..];
        let len = OPERATORS_3
            .iter()
            .chain(OPERATORS_2.iter())
            .find(|op| rest.starts_with(**op))
            .map(|op| op.len())
            .or_else(|| OPERATORS_1.contains(&self.bytes[start]).then_some(1));
        let Some(len) = len else {
            return Err(self.err(start, format!("invalid character {:?}", self.char_at(start))));
        };
        let b = self.bytes[start];
        if len == 1 {
            match b {
                b'(' | b'[' | b'{' => self.brackets.push((b, start)),
                b')' | b']' | b'}' => {
                    let expected = match b {
                        b')' => b'(',
                        b']' => b'[',
                        _ => b'{',
                    };
                    match self.brackets.pop() {
                        Some((open, _)) if open == expected => {}
                        _ => return Err(self.err(start, format!("unmatched '{}'", b as char))),
                    }
                }
                _ => {}
            }
        }
        self.pos += len;
        self.push(TokenKind::Op, start, start + len);
        Ok(())
    }

    fn finish(mut self) -> Result<Vec<Token>, LexError> {
        if let Some((_, at)) = self.brackets.last() {
            return Err(self.err(*at, "EOF in multi-line statement"));
        }
        let end = self.bytes.len();
        let needs_newline = self
            .tokens
            .iter()
            .rev()
            .find(|t| !matches!(t.kind, TokenKind::Comment | TokenKind::Nl));
        if let Some(t) = needs_newline {
            if !matches!(t.kind, TokenKind::Newline | TokenKind::Dedent | TokenKind::Indent) {
                self.push(TokenKind::Newline, end, end);
            }
        }
        while self.indents.len() > 1 {
            self.indents.pop();
            self.push(TokenKind::Dedent, end, end);
        }
        self.push(TokenKind::EndMarker, end, end);
        Ok(self.tokens)
    }
}

/// Returns the end offset of a string literal whose opening quote is at
/// `open`, or the offset where scanning failed.
fn scan_string_body(bytes: &[u8], open: usize, is_format: bool) -> Result<usize, usize> {
    let quote = bytes[open];
    let triple = bytes.get(open + 1) == Some(&quote) && bytes.get(open + 2) == Some(&quote);
    let mut i = open + if triple { 3 } else { 1 };
    loop {
        let Some(&b) = bytes.get(i) else {
            return Err(open);
        };
        match b {
            b'\\' => {
                i += 1;
                if bytes.get(i) == Some(&b'\r') && bytes.get(i + 1) == Some(&b'\n') {
                    i += 2;
                } else {
                    i += utf8_width(bytes.get(i).copied());
                }
            }
            _ if b == quote => {
                if !triple {
                    return Ok(i + 1);
                }
                if bytes.get(i + 1) == Some(&quote) && bytes.get(i + 2) == Some(&quote) {
                    return Ok(i + 3);
                }
                i += 1;
            }
            b'\n' | b'\r' if !triple => return Err(i),
            b'{' if is_format => {
                if bytes.get(i + 1) == Some(&b'{') {
                    i += 2;
                } else {
                    i = scan_replacement_field(bytes, i)?;
                }
            }
            _ => i += 1,
        }
    }
}

/// Skips an f-string replacement field starting at the `{` at `open`.
fn scan_replacement_field(bytes: &[u8], open: usize) -> Result<usize, usize> {
    let mut depth = 0usize;
    let mut i = open;
    while let Some(&b) = bytes.get(i) {
        match b {
            b'{' | b'[' | b'(' => {
                depth += 1;
                i += 1;
            }
            b'}' | b']' | b')' => {
                depth -= 1;
                i += 1;
                if depth == 0 {
                    return Ok(i);
                }
            }
            b'\'' | b'"' => {
                let is_format = i > 0 && matches!(bytes[i - 1], b'f' | b'F');
                i = scan_string_body(bytes, i, is_format)?;
            }
            _ => i += 1,
        }
    }
    Err(open)
}

fn utf8_width(first: Option<u8>) -> usize {
    match first {
        None => 0,
        Some(b) if b < 0x80 => 1,
        Some(b) if b >> 5 == 0b110 => 2,
        Some(b) if b >> 4 == 0b1110 => 3,
        Some(_) => 4,
    }
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c.is_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

/// Whether `s` matches the identifier grammar `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c == '_' || c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c == '_' || c.is_ascii_alphanumeric())
}

pub const KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class", "continue", "def", "del",
    "elif", "else", "except", "finally", "for", "from", "global", "if", "import", "in", "is", "lambda", "nonlocal",
    "not", "or", "pass", "raise", "return", "try", "while", "with", "yield",
];
