//! Canonical text and JSON encodings of composition multisets.
//!
//! Text form:
//!
//! ```text
//! n=3
//! 1 0 1 2
//! 1 1 0 1
//! 2 1 1 2
//! 3 1 2 1
//! ```
//!
//! one line `<len> <zeros> <ones> <count>` per distinct composition, sorted
//! by length and then by zeros. Parsing only checks structure; cardinality
//! checks are left to [`CompositionMultiset::validate`].

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::composition::{Composition, CompositionMultiset};
use crate::error::{Error, Result};

pub const JSON_VERSION: u32 = 1;

pub fn to_text(c: &CompositionMultiset) -> String {
    let mut out = format!("n={}\n", c.n());
    for l in 1..=c.n() {
        for (comp, count) in c.compositions(l) {
            writeln!(out, "{l} {} {} {count}", comp.zeros, comp.ones).unwrap();
        }
    }
    out
}

fn malformed(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::MalformedInput {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_text(text: &str) -> Result<CompositionMultiset> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line))
        .filter(|(_, line)| !line.trim().is_empty());

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| malformed(1, 1, "missing `n=<int>` header"))?;
    let header = header.trim();
    let n: usize = header
        .strip_prefix("n=")
        .ok_or_else(|| malformed(header_line, 1, "expected `n=<int>` header"))?
        .parse()
        .map_err(|_| {
            malformed(
                header_line,
                3,
                "header length is not a non-negative integer",
            )
        })?;
    let mut multiset = CompositionMultiset::empty(n)
        .map_err(|_| malformed(header_line, 3, "length must be at least 1"))?;

    let mut previous: Option<(usize, usize)> = None;
    for (line_no, line) in lines {
        let mut fields = [0u64; 4];
        let mut count = 0;
        let mut offset = 0;
        for token in line.split_whitespace() {
            let column = line[offset..].find(token).unwrap() + offset + 1;
            offset = column - 1 + token.len();
            if count == 4 {
                return Err(malformed(line_no, column, "expected exactly four fields"));
            }
            fields[count] = token.parse().map_err(|_| {
                malformed(
                    line_no,
                    column,
                    format!("{token:?} is not a non-negative integer"),
                )
            })?;
            count += 1;
        }
        if count != 4 {
            return Err(malformed(
                line_no,
                offset + 1,
                "expected exactly four fields",
            ));
        }
        let [l, zeros, ones, n_copies] = fields.map(|f| f as usize);
        if l == 0 || l > n {
            return Err(malformed(line_no, 1, format!("class {l} outside 1..={n}")));
        }
        if zeros + ones != l {
            return Err(malformed(
                line_no,
                1,
                format!("composition 0^{zeros}1^{ones} does not have length {l}"),
            ));
        }
        if n_copies == 0 {
            return Err(malformed(line_no, 1, "count must be positive"));
        }
        if previous.is_some_and(|p| p >= (l, zeros)) {
            return Err(malformed(
                line_no,
                1,
                "lines must be strictly sorted by (length, zeros)",
            ));
        }
        previous = Some((l, zeros));
        multiset.insert(Composition { zeros, ones }, n_copies as u64)?;
    }
    Ok(multiset)
}

/// `(length, [(zeros, ones, count)])` per class.
type JsonClass = (usize, Vec<(usize, usize, u64)>);

#[derive(Serialize, Deserialize)]
struct JsonMultiset {
    version: u32,
    n: usize,
    classes: Vec<JsonClass>,
}

pub fn to_json(c: &CompositionMultiset) -> String {
    let doc = JsonMultiset {
        version: JSON_VERSION,
        n: c.n(),
        classes: (1..=c.n())
            .map(|l| {
                (
                    l,
                    c.compositions(l)
                        .map(|(comp, count)| (comp.zeros, comp.ones, count))
                        .collect(),
                )
            })
            .filter(|(_, entries): &(usize, Vec<_>)| !entries.is_empty())
            .collect(),
    };
    serde_json::to_string(&doc).expect("serializing plain data")
}

pub fn parse_json(text: &str) -> Result<CompositionMultiset> {
    let doc: JsonMultiset =
        serde_json::from_str(text).map_err(|e| malformed(e.line(), e.column(), e.to_string()))?;
    if doc.version != JSON_VERSION {
        return Err(malformed(
            1,
            1,
            format!("unsupported version {}", doc.version),
        ));
    }
    let mut multiset = CompositionMultiset::empty(doc.n)
        .map_err(|_| malformed(1, 1, "length must be at least 1"))?;
    for (l, entries) in doc.classes {
        for (zeros, ones, count) in entries {
            if l == 0 || l > doc.n || zeros + ones != l {
                return Err(malformed(
                    1,
                    1,
                    format!("composition 0^{zeros}1^{ones} invalid for class {l}"),
                ));
            }
            multiset.insert(Composition { zeros, ones }, count)?;
        }
    }
    Ok(multiset)
}

/// Parses either encoding, picking JSON when the document starts with `{`.
pub fn parse_any(text: &str) -> Result<CompositionMultiset> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}
