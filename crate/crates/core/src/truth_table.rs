//! Plain-text truth tables.
//!
//! ```text
//! # optional comments
//! n=2
//! + - - +
//! ```
//!
//! Entries are `+`/`-` or `+1`/`-1`/`1` in index order. Blank lines and lines
//! starting with `#` are ignored; entries may wrap across lines.

use crate::error::{BfnError, Result};
use crate::function::{check_arity, BooleanFunction};

fn parse_error(line: usize, offset: usize, message: impl Into<String>) -> BfnError {
    BfnError::Parse {
        line,
        offset,
        message: message.into(),
    }
}

/// Yields `(byte_offset, token)` pairs of a line.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace()
        .map(move |tok| (tok.as_ptr() as usize - line.as_ptr() as usize, tok))
}

pub fn parse_truth_table(text: &str) -> Result<BooleanFunction> {
    let mut arity: Option<(usize, usize)> = None;
    let mut table = Vec::new();
    let mut last = (1, 0);

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((_, n)) = arity else {
            let offset = raw.len() - trimmed.len();
            let value = trimmed
                .trim_end()
                .strip_prefix("n=")
                .ok_or_else(|| parse_error(lineno, offset, "expected header `n=<arity>`"))?;
            let n: usize = value
                .trim()
                .parse()
                .map_err(|_| parse_error(lineno, offset + 2, format!("bad arity `{value}`")))?;
            check_arity(n).map_err(|e| parse_error(lineno, offset + 2, e.to_string()))?;
            arity = Some((lineno, n));
            continue;
        };
        for (offset, tok) in tokens(raw) {
            let v = match tok {
                "+" | "+1" | "1" => 1,
                "-" | "-1" => -1,
                _ => {
                    return Err(parse_error(
                        lineno,
                        offset,
                        format!("invalid entry `{tok}`"),
                    ))
                }
            };
            if table.len() == 1 << n {
                return Err(parse_error(
                    lineno,
                    offset,
                    format!("too many entries: expected {}", 1usize << n),
                ));
            }
            table.push(v);
            last = (lineno, offset + tok.len());
        }
    }

    let Some((header_line, n)) = arity else {
        return Err(parse_error(last.0, 0, "missing header `n=<arity>`"));
    };
    if table.len() != 1 << n {
        let (line, offset) = if table.is_empty() {
            (header_line, 0)
        } else {
            last
        };
        return Err(parse_error(
            line,
            offset,
            format!(
                "expected {} entries for n={n}, found {}",
                1usize << n,
                table.len()
            ),
        ));
    }
    BooleanFunction::from_table(n, table)
}

/// Canonical form: header line, then one line of `+`/`-` separated by spaces.
pub fn emit_truth_table(f: &BooleanFunction) -> String {
    let body: Vec<&str> = f
        .table()
        .iter()
        .map(|&v| if v > 0 { "+" } else { "-" })
        .collect();
    format!("n={}\n{}\n", f.arity(), body.join(" "))
}
