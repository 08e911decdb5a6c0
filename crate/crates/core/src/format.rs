//! Plain-text graph and labelling files.
//!
//! Graphs:
//!
//! ```text
//! # comment
//! p 3 3
//! e 1 2
//! e 2 3
//! e 1 3
//! ```
//!
//! Labellings hold one `u v label` line per edge, in edge order.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{build_graph, Graph};
use crate::labelling::Labelling;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn fields(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then(|| (i + 1, line.split_whitespace().collect()))
    })
}

fn number(line: usize, tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| {
        parse_err(
            line,
            format!("expected a non-negative integer, got `{tok}`"),
        )
    })
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = fields(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "missing `p <n> <m>` header"))?;
    if header.len() != 3 || header[0] != "p" {
        return Err(parse_err(line, "expected `p <n> <m>`"));
    }
    let n = number(line, header[1])?;
    let m = number(line, header[2])?;
    let mut pairs = Vec::with_capacity(m);
    let mut last = line;
    for (line, f) in lines {
        if f.len() != 3 || f[0] != "e" {
            return Err(parse_err(line, "expected `e <u> <v>`"));
        }
        pairs.push((number(line, f[1])?, number(line, f[2])?));
        last = line;
    }
    if pairs.len() != m {
        return Err(parse_err(
            last,
            format!("header announces {m} edges, found {}", pairs.len()),
        ));
    }
    build_graph(n, &pairs)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.vertex_count(), g.edge_count());
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "e {} {}", a + 1, b + 1);
    }
    out
}

/// Reads a labelling for `g`. Lines may come in any order but must name
/// every edge of `g` exactly once.
pub fn parse_labelling(g: &Graph, text: &str) -> Result<Labelling> {
    let m = g.edge_count();
    let mut labels: Vec<Option<usize>> = vec![None; m];
    let mut seen = 0;
    for (line, f) in fields(text) {
        if f.len() != 3 {
            return Err(parse_err(line, "expected `<u> <v> <label>`"));
        }
        let (u, v, label) = (
            number(line, f[0])?,
            number(line, f[1])?,
            number(line, f[2])?,
        );
        let n = g.vertex_count();
        if u == 0 || v == 0 || u > n || v > n {
            return Err(parse_err(line, format!("vertex out of range 1..={n}")));
        }
        let e = g
            .edge_between(u - 1, v - 1)
            .ok_or_else(|| parse_err(line, format!("{u}-{v} is not an edge of the graph")))?;
        if labels[e].replace(label).is_some() {
            return Err(parse_err(line, format!("edge {u}-{v} labelled twice")));
        }
        seen += 1;
    }
    if seen != m {
        return Err(parse_err(
            0,
            format!("graph has {m} edges, labelling covers {seen}"),
        ));
    }
    Ok(Labelling::from_labels(
        g,
        labels.into_iter().map(Option::unwrap).collect(),
    ))
}

pub fn write_labelling(g: &Graph, l: &Labelling) -> String {
    let mut out = String::new();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let _ = writeln!(out, "{} {} {}", a + 1, b + 1, l.label_of(e));
    }
    out
}
