//! Python source handling: tokenization and structural queries.

pub mod lexer;
pub mod source;

pub use lexer::{is_identifier, tokenize, LexError, Token, TokenKind};
pub use source::{
    clean_docstring, docstrings, function_defs, references_name, rename_identifier, top_level_asserts,
    top_level_statements, Docstring, FunctionDef, StatementKind, TopLevelStatement,
};
