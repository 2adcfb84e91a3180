//! Text formats: `.sgf` signed-graph files and `.flw` flow files.
//!
//! Both formats are ASCII with LF line endings and single-space separators;
//! lines starting with `#` are comments. An `.sgf` file is
//!
//! ```text
//! sgf 1
//! <n> <m>
//! <end1> <end2> <sign>    (m lines; sign is + or -)
//! ```
//!
//! with vertex indices in `0..n` and edge ids given by line order. An `.flw`
//! file has one line per edge, `<edge-id> <dir1> <dir2> <value>`, where the
//! direction at each endpoint is `a` (away) or `t` (toward), covering every
//! edge id exactly once.

use std::fmt::Write as _;

use thiserror::Error;

use sixflow::{Dir, EdgeValuation, Orientation, Sign, SignedGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("unexpected end of file: {0}")]
    UnexpectedEof(String),
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError::Line {
            line,
            message: message.into(),
        }
    }
}

/// Content lines with their 1-based numbers; comments and blanks skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty())
}

pub fn parse_sgf(text: &str) -> Result<SignedGraph, ParseError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| ParseError::UnexpectedEof("missing header".into()))?;
    if header != "sgf 1" {
        return Err(ParseError::at(
            ln,
            format!("bad header {header:?}, expected \"sgf 1\""),
        ));
    }
    let (ln, counts) = lines
        .next()
        .ok_or_else(|| ParseError::UnexpectedEof("missing vertex/edge counts".into()))?;
    let mut it = counts.split(' ');
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| ParseError::at(ln, "bad vertex count"))?;
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| ParseError::at(ln, "bad edge count"))?;
    if it.next().is_some() {
        return Err(ParseError::at(ln, "trailing tokens after counts"));
    }

    let mut g = SignedGraph::new(n);
    for _ in 0..m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| ParseError::UnexpectedEof(format!("expected {m} edge lines")))?;
        let mut it = line.split(' ');
        let u: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ParseError::at(ln, "bad first endpoint"))?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ParseError::at(ln, "bad second endpoint"))?;
        let sign = match it.next() {
            Some("+") => Sign::Positive,
            Some("-") => Sign::Negative,
            other => {
                return Err(ParseError::at(
                    ln,
                    format!("bad sign token {other:?}, expected + or -"),
                ))
            }
        };
        if it.next().is_some() {
            return Err(ParseError::at(ln, "trailing tokens after edge"));
        }
        if u >= n {
            return Err(ParseError::at(
                ln,
                format!("endpoint {u} out of range (n = {n})"),
            ));
        }
        if v >= n {
            return Err(ParseError::at(
                ln,
                format!("endpoint {v} out of range (n = {n})"),
            ));
        }
        g.add_edge(u, v, sign).expect("endpoints checked");
    }
    if let Some((ln, _)) = lines.next() {
        return Err(ParseError::at(ln, "unexpected content after edge lines"));
    }
    Ok(g)
}

/// Canonical serialization. Vertices are renumbered by rank and live edges
/// emitted in id order, so a freshly parsed graph round-trips byte-exactly.
pub fn serialize_sgf(g: &SignedGraph) -> String {
    let verts = g.vertex_ids();
    let rank = |v: usize| verts.binary_search(&v).unwrap();
    let mut out = String::new();
    out.push_str("sgf 1\n");
    writeln!(out, "{} {}", verts.len(), g.edge_count()).unwrap();
    for (_, edge) in g.edges() {
        let s = if edge.sign.is_negative() { '-' } else { '+' };
        writeln!(out, "{} {} {}", rank(edge.ends[0]), rank(edge.ends[1]), s).unwrap();
    }
    out
}

/// One `.flw` line: an edge id, its two direction marks, and a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlwEntry {
    pub edge: usize,
    pub dirs: [Dir; 2],
    pub value: i64,
}

pub fn parse_flw(text: &str) -> Result<Vec<FlwEntry>, ParseError> {
    let dir = |ln: usize, t: Option<&str>| match t {
        Some("a") => Ok(Dir::Away),
        Some("t") => Ok(Dir::Toward),
        other => Err(ParseError::at(
            ln,
            format!("bad direction token {other:?}, expected a or t"),
        )),
    };
    let mut entries = Vec::new();
    for (ln, line) in content_lines(text) {
        let mut it = line.split(' ');
        let edge: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ParseError::at(ln, "bad edge id"))?;
        let d0 = dir(ln, it.next())?;
        let d1 = dir(ln, it.next())?;
        let value: i64 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ParseError::at(ln, "bad value"))?;
        if it.next().is_some() {
            return Err(ParseError::at(ln, "trailing tokens after entry"));
        }
        entries.push(FlwEntry {
            edge,
            dirs: [d0, d1],
            value,
        });
    }
    Ok(entries)
}

pub fn serialize_flw(g: &SignedGraph, tau: &Orientation, f: &EdgeValuation) -> String {
    let mut out = String::new();
    for e in g.edge_ids() {
        let [d0, d1] = tau.dirs(e);
        let t = |d: Dir| if d == Dir::Away { 'a' } else { 't' };
        writeln!(out, "{} {} {} {}", e, t(d0), t(d1), f.get(e)).unwrap();
    }
    out
}

/// Binds parsed `.flw` entries to a graph, checking that every edge is
/// covered exactly once.
pub fn bind_flw(
    g: &SignedGraph,
    entries: &[FlwEntry],
) -> Result<(Orientation, EdgeValuation), ParseError> {
    let m = g.slot_count();
    let mut dirs = vec![[Dir::Away, Dir::Toward]; m];
    let mut values = vec![0i64; m];
    let mut seen = vec![false; m];
    for entry in entries {
        if entry.edge >= m || g.edge(entry.edge).is_none() {
            return Err(ParseError::at(0, format!("unknown edge id {}", entry.edge)));
        }
        if seen[entry.edge] {
            return Err(ParseError::at(
                0,
                format!("duplicate edge id {}", entry.edge),
            ));
        }
        seen[entry.edge] = true;
        dirs[entry.edge] = entry.dirs;
        values[entry.edge] = entry.value;
    }
    if let Some(e) = g.edge_ids().find(|&e| !seen[e]) {
        return Err(ParseError::at(0, format!("edge {e} is not covered")));
    }
    Ok((
        Orientation::from_dirs(dirs),
        EdgeValuation::from_values(values),
    ))
}
