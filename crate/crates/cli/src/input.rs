//! Whitespace-separated integer input with line/column diagnostics.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based; `None` at end of input.
    pub at: Option<(usize, usize)>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.at {
            Some((line, col)) => write!(f, "line {line}, column {col}: {}", self.message),
            None => write!(f, "end of input: {}", self.message),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub col: usize,
}

impl Token<'_> {
    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            at: Some((self.line, self.col)),
            message: message.into(),
        }
    }
}

pub struct Tokens<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    pub fn new(text: &'a str) -> Self {
        let mut tokens = Vec::new();
        for (l, line) in text.lines().enumerate() {
            let mut rest = line;
            let mut offset = 0;
            while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
                let after = &rest[start..];
                let len = after.find(char::is_whitespace).unwrap_or(after.len());
                tokens.push(Token {
                    text: &after[..len],
                    line: l + 1,
                    col: line[..offset + start].chars().count() + 1,
                });
                offset += start + len;
                rest = &after[len..];
            }
        }
        Self { tokens, pos: 0 }
    }

    /// Next token parsed as `T`; `what` names it in diagnostics.
    pub fn next<T: FromStr>(&mut self, what: &str) -> Result<(T, Token<'a>), ParseError> {
        let tok = *self.tokens.get(self.pos).ok_or_else(|| ParseError {
            at: None,
            message: format!("expected {what}"),
        })?;
        self.pos += 1;
        let value = tok
            .text
            .parse()
            .map_err(|_| tok.error(format!("expected {what}, found '{}'", tok.text)))?;
        Ok((value, tok))
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        match self.tokens.get(self.pos) {
            None => Ok(()),
            Some(tok) => Err(tok.error(format!("unexpected trailing input '{}'", tok.text))),
        }
    }
}
