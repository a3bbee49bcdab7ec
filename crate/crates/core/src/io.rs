//! Text formats for tables.
//!
//! A table file holds optional `#` comment lines, a line with the order `n`,
//! `n` lines of `n` whitespace-separated 1-based entries, and optionally a
//! final `names: a b c ...` line. Blank lines are ignored.
//!
//! A corpus line is the same data flattened: `n;row;row;...`.

use std::fmt::Write;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::semigroup::MulTable;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses 1-based entries into a 0-based row.
fn parse_row(text: &str, n: usize, line: usize) -> Result<Vec<usize>> {
    let row: Vec<usize> = text
        .split_whitespace()
        .map(|tok| match tok.parse::<usize>() {
            Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
            Ok(v) => Err(parse_error(line, format!("entry {v} is outside 1..={n}"))),
            Err(_) => Err(parse_error(line, format!("`{tok}` is not an element index"))),
        })
        .collect::<Result<_>>()?;
    if row.len() != n {
        return Err(parse_error(line, format!("expected {n} entries, found {}", row.len())));
    }
    Ok(row)
}

fn build(rows: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<MulTable> {
    let table = MulTable::from_rows(&rows)?;
    match names {
        Some(names) => table.with_names(names),
        None => Ok(table),
    }
}

pub fn parse_table(text: &str) -> Result<MulTable> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (first, order_text) = lines.next().ok_or_else(|| parse_error(1, "missing order line"))?;
    let n: usize = order_text
        .parse()
        .map_err(|_| parse_error(first, format!("`{order_text}` is not an order")))?;
    if n == 0 {
        return Err(parse_error(first, "order must be positive"));
    }
    if n > crate::semigroup::SIZE_CAP {
        return Err(Error::SizeCap { requested: n, cap: crate::semigroup::SIZE_CAP });
    }
    let mut rows = Vec::with_capacity(n);
    let mut last = first;
    for _ in 0..n {
        let (line, text) = lines
            .next()
            .ok_or_else(|| parse_error(last + 1, format!("expected {n} rows, found {}", rows.len())))?;
        rows.push(parse_row(text, n, line)?);
        last = line;
    }
    let names = match lines.next() {
        None => None,
        Some((line, text)) => {
            let list = text
                .strip_prefix("names:")
                .ok_or_else(|| parse_error(line, "unexpected data after the table"))?;
            let names: Vec<String> = list.split_whitespace().map(String::from).collect();
            if names.len() != n {
                return Err(parse_error(line, format!("expected {n} names, found {}", names.len())));
            }
            if let Some((line, _)) = lines.next() {
                return Err(parse_error(line, "unexpected data after the names line"));
            }
            Some(names)
        }
    };
    build(rows, names)
}

pub fn print_table(s: &MulTable) -> String {
    let mut out = format!("{}\n", s.order());
    for row in s.rows() {
        writeln!(out, "{}", row.iter().map(|x| x + 1).join(" ")).unwrap();
    }
    if let Some(names) = s.names() {
        writeln!(out, "names: {}", names.join(" ")).unwrap();
    }
    out
}

/// `n;row;row;...` with 1-based entries. Names are dropped.
pub fn corpus_line(s: &MulTable) -> String {
    std::iter::once(s.order().to_string())
        .chain(s.rows().iter().map(|row| row.iter().map(|x| x + 1).join(" ")))
        .join(";")
}

pub fn parse_corpus_line(line: &str) -> Result<MulTable> {
    let mut parts = line.trim().split(';');
    let head = parts.next().unwrap_or_default();
    let n: usize = head
        .trim()
        .parse()
        .map_err(|_| parse_error(1, format!("`{head}` is not an order")))?;
    if n == 0 || n > crate::semigroup::SIZE_CAP {
        return Err(parse_error(1, format!("order {n} is out of range")));
    }
    let rows: Vec<Vec<usize>> = parts.map(|p| parse_row(p, n, 1)).collect::<Result<_>>()?;
    if rows.len() != n {
        return Err(parse_error(1, format!("expected {n} rows, found {}", rows.len())));
    }
    build(rows, None)
}

/// Comma-separated 1-based element list, e.g. `1,2,3`. Empty text is the
/// empty list.
pub fn parse_element_list(text: &str, order: usize) -> Result<Vec<usize>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|tok| match tok.trim().parse::<usize>() {
            Ok(v) if (1..=order).contains(&v) => Ok(v - 1),
            _ => Err(parse_error(1, format!("`{}` is not an element of 1..={order}", tok.trim()))),
        })
        .collect()
}

pub fn format_element_list(xs: &[usize]) -> String {
    xs.iter().map(|x| x + 1).join(",")
}
