//! Edge-list text format.
//!
//! ```text
//! # comment
//! nodes 5
//! 0 1
//! 1 2
//! ```
//!
//! The `nodes N` header declares the node count so isolated nodes survive a
//! round trip. Without it the count is one more than the largest id seen.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use super::{DynGraph, NodeId};
use crate::error::{Error, Result};

/// Non-empty lines with `#` comments stripped, tagged with 1-based line numbers.
pub(crate) fn content_lines<R: Read>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    BufReader::new(reader)
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Err(e) => Some(Err(Error::from(e))),
            Ok(line) => {
                let body = line.split('#').next().unwrap_or("").trim().to_string();
                (!body.is_empty()).then_some(Ok((i + 1, body)))
            }
        })
}

pub(crate) fn parse_field<T: std::str::FromStr>(
    source: &str,
    line: usize,
    token: Option<&str>,
    what: &str,
) -> Result<T> {
    let token = token.ok_or_else(|| Error::parse(source, line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| Error::parse(source, line, format!("invalid {what} {token:?}")))
}

pub fn read_edge_list<R: Read>(reader: R, source: &str) -> Result<DynGraph> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(NodeId, NodeId, usize)> = Vec::new();
    for item in content_lines(reader) {
        let (line, body) = item?;
        let mut tokens = body.split_whitespace();
        let first = tokens.next().unwrap();
        if first == "nodes" {
            if declared.is_some() {
                return Err(Error::parse(source, line, "duplicate nodes header"));
            }
            declared = Some(parse_field(source, line, tokens.next(), "node count")?);
        } else {
            let a: NodeId = parse_field(source, line, Some(first), "node id")?;
            let b: NodeId = parse_field(source, line, tokens.next(), "node id")?;
            if a == b {
                return Err(Error::parse(source, line, format!("self-loop on node {a}")));
            }
            edges.push((a, b, line));
        }
        if tokens.next().is_some() {
            return Err(Error::parse(source, line, "trailing tokens"));
        }
    }
    let max_id = edges
        .iter()
        .map(|&(a, b, _)| a.max(b) as usize + 1)
        .max()
        .unwrap_or(0);
    let n = declared.unwrap_or(max_id);
    if let Some(&(a, b, line)) = edges.iter().find(|&&(a, b, _)| a.max(b) as usize >= n) {
        return Err(Error::parse(
            source,
            line,
            format!("edge ({a},{b}) exceeds declared node count {n}"),
        ));
    }
    DynGraph::from_edges(n, edges.into_iter().map(|(a, b, _)| (a, b)))
}

pub fn read_edge_list_file(path: &Path) -> Result<DynGraph> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::input(format!("cannot open {}: {e}", path.display())))?;
    read_edge_list(file, &path.display().to_string())
}

pub fn edge_list_string(g: &DynGraph) -> String {
    let mut out = String::with_capacity(16 + g.edge_count() * 12);
    writeln!(out, "nodes {}", g.node_count()).unwrap();
    for p in g.edges() {
        writeln!(out, "{} {}", p.lo(), p.hi()).unwrap();
    }
    out
}

pub fn write_edge_list<W: Write>(g: &DynGraph, mut w: W) -> Result<()> {
    w.write_all(edge_list_string(g).as_bytes())?;
    Ok(())
}

pub fn write_edge_list_file(g: &DynGraph, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_edge_list(g, std::io::BufWriter::new(file))
}
