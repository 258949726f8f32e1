use thiserror::Error;

/// A diagnostic for malformed text input, 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// Whitespace-separated tokens of one line with their 1-based columns.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Drop a comment: a token starting with `#` that is the first token on the
/// line, or any later token beginning with `#` followed by more text or
/// standing after the required fields. Callers pass how many leading tokens
/// are data; `#` inside those is data (the border letter).
pub(crate) fn strip_comment<'a>(toks: &[(usize, &'a str)], data_fields: usize) -> Vec<(usize, &'a str)> {
    if toks.first().is_some_and(|(_, t)| t.starts_with('#')) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &(col, t)) in toks.iter().enumerate() {
        if i >= data_fields && t.starts_with('#') {
            break;
        }
        out.push((col, t));
    }
    out
}
