//! The `.sgt` multi-table text format.
//!
//! A document is a sequence of blocks separated by blank lines. A block is any number of
//! `#` comment lines (a `# name: <string>` comment names the block), a line holding the order
//! `n`, then `n` lines of `n` whitespace-separated element indices. Comment lines that are
//! not followed by a table (such as a leading `# provenance:` line) form the header.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::semigroup::FiniteSemigroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SgtBlock {
    pub name: Option<String>,
    pub semigroup: FiniteSemigroup,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SgtDocument {
    /// Comment lines not attached to any table, without the leading `#`.
    pub header: Vec<String>,
    pub blocks: Vec<SgtBlock>,
}

impl SgtDocument {
    /// Value of the first `# provenance:` header line, if any.
    pub fn provenance(&self) -> Option<&str> {
        self.header
            .iter()
            .find_map(|l| l.strip_prefix("provenance:").map(str::trim))
    }

    pub fn semigroups(&self) -> impl Iterator<Item = &FiniteSemigroup> {
        self.blocks.iter().map(|b| &b.semigroup)
    }
}

enum State {
    Between,
    Rows {
        order: usize,
        rows: Vec<Vec<usize>>,
        order_line: usize,
    },
    Done,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_numbers(line_no: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_error(line_no, format!("`{tok}` is not a non-negative integer")))
        })
        .collect()
}

pub fn parse(text: &str) -> Result<SgtDocument> {
    let mut doc = SgtDocument::default();
    let mut comments: Vec<String> = Vec::new();
    let mut state = State::Between;

    let finish = |doc: &mut SgtDocument,
                  comments: &mut Vec<String>,
                  order: usize,
                  rows: Vec<Vec<usize>>,
                  order_line: usize|
     -> Result<()> {
        let semigroup = FiniteSemigroup::from_rows(order, &rows)
            .map_err(|e| parse_error(order_line, e.to_string()))?;
        let name = comments
            .iter()
            .find_map(|c| c.strip_prefix("name:").map(|n| n.trim().to_string()));
        comments.clear();
        doc.blocks.push(SgtBlock { name, semigroup });
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            match state {
                State::Rows { .. } => {
                    return Err(parse_error(line_no, "blank line inside a table"));
                }
                State::Between | State::Done => {
                    doc.header.append(&mut comments);
                    state = State::Between;
                }
            }
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if matches!(state, State::Done) {
                return Err(parse_error(line_no, "missing blank line after a table"));
            }
            comments.push(comment.trim().to_string());
            continue;
        }
        state = match state {
            State::Done => return Err(parse_error(line_no, "missing blank line after a table")),
            State::Between => {
                let nums = parse_numbers(line_no, line)?;
                let [order] = nums[..] else {
                    return Err(parse_error(line_no, "expected a single order"));
                };
                if order == 0 {
                    finish(&mut doc, &mut comments, 0, Vec::new(), line_no)?;
                    State::Done
                } else {
                    State::Rows {
                        order,
                        rows: Vec::with_capacity(order),
                        order_line: line_no,
                    }
                }
            }
            State::Rows {
                order,
                mut rows,
                order_line,
            } => {
                let row = parse_numbers(line_no, line)?;
                if row.len() != order {
                    return Err(parse_error(
                        line_no,
                        format!("expected {order} entries, found {}", row.len()),
                    ));
                }
                rows.push(row);
                if rows.len() == order {
                    finish(&mut doc, &mut comments, order, rows, order_line)?;
                    State::Done
                } else {
                    State::Rows {
                        order,
                        rows,
                        order_line,
                    }
                }
            }
        };
    }
    if let State::Rows { order_line, .. } = state {
        return Err(parse_error(order_line, "table ends early"));
    }
    doc.header.append(&mut comments);
    Ok(doc)
}

fn write_block(out: &mut String, name: Option<&str>, s: &FiniteSemigroup) {
    if let Some(name) = name {
        let _ = writeln!(out, "# name: {name}");
    }
    let _ = write!(out, "{s}");
}

/// Blocks separated by single blank lines, no header.
pub fn write_blocks<'a>(
    blocks: impl IntoIterator<Item = (Option<&'a str>, &'a FiniteSemigroup)>,
) -> String {
    write_document(&[], blocks)
}

/// Header comment lines, a blank line, then the blocks.
pub fn write_document<'a>(
    header: &[String],
    blocks: impl IntoIterator<Item = (Option<&'a str>, &'a FiniteSemigroup)>,
) -> String {
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    let mut first = header.is_empty();
    for (name, s) in blocks {
        if !first {
            out.push('\n');
        }
        first = false;
        write_block(&mut out, name, s);
    }
    out
}

/// A homomorphism map: whitespace-separated indices, `#` comments allowed.
pub fn parse_map(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.extend(parse_numbers(idx + 1, line)?);
    }
    Ok(out)
}
