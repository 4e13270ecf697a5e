//! Whitespace-separated integer instance files.

use std::fmt::Write;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid instance: {0}")]
    Invalid(String),
}

pub(crate) fn invalid(message: impl Into<String>) -> InstanceError {
    InstanceError::Invalid(message.into())
}

/// Reads integers one at a time, remembering the line each came from.
/// Anything after a `#` on a line is ignored.
pub(crate) struct Tokens<'a> {
    tokens: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    pub fn new(text: &'a str) -> Self {
        let tokens = text
            .lines()
            .enumerate()
            .flat_map(|(i, line)| {
                let line = line.split('#').next().unwrap_or("");
                line.split_whitespace().map(move |t| (i + 1, t))
            })
            .collect();
        Tokens { tokens, pos: 0 }
    }

    fn last_line(&self) -> usize {
        self.tokens.last().map_or(1, |t| t.0)
    }

    pub fn int(&mut self, what: &str) -> Result<i64, InstanceError> {
        let Some(&(line, tok)) = self.tokens.get(self.pos) else {
            return Err(InstanceError::Parse {
                line: self.last_line(),
                message: format!("unexpected end of input, expected {what}"),
            });
        };
        self.pos += 1;
        tok.parse().map_err(|_| InstanceError::Parse {
            line,
            message: format!("expected integer {what}, found `{tok}`"),
        })
    }

    pub fn count(&mut self, what: &str, max: usize) -> Result<usize, InstanceError> {
        let line = self.tokens.get(self.pos).map_or(self.last_line(), |t| t.0);
        let v = self.int(what)?;
        if v < 0 || v as u64 > max as u64 {
            return Err(InstanceError::Parse {
                line,
                message: format!("{what} must be between 0 and {max}, found {v}"),
            });
        }
        Ok(v as usize)
    }

    pub fn ints(&mut self, n: usize, what: &str) -> Result<Vec<i64>, InstanceError> {
        (0..n).map(|i| self.int(&format!("{what}[{i}]"))).collect()
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, what: &str) -> Result<Vec<Vec<i64>>, InstanceError> {
        (0..rows)
            .map(|r| (0..cols).map(|c| self.int(&format!("{what}[{r}][{c}]"))).collect())
            .collect()
    }

    pub fn finish(&self) -> Result<(), InstanceError> {
        match self.tokens.get(self.pos) {
            None => Ok(()),
            Some(&(line, tok)) => Err(InstanceError::Parse {
                line,
                message: format!("unexpected trailing token `{tok}`"),
            }),
        }
    }
}

pub(crate) fn write_row(out: &mut String, row: &[i64]) {
    let mut first = true;
    for v in row {
        if !first {
            out.push(' ');
        }
        first = false;
        let _ = write!(out, "{v}");
    }
    out.push('\n');
}
