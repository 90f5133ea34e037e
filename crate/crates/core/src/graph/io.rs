use std::io::{BufRead, Write};

use super::Graph;
use crate::error::{Error, Result};

/// Parses `u v` lines; `#` starts a comment, blank lines are skipped.
/// `first_line` is the 1-based line number of the first line, for messages.
pub fn parse_edge_list<'a>(
    lines: impl IntoIterator<Item = &'a str>,
    first_line: usize,
) -> Result<Vec<(u32, u32)>> {
    let mut edges = Vec::new();
    for (i, raw) in lines.into_iter().enumerate() {
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let malformed = || Error::MalformedLine { line: first_line + i, text: raw.trim().to_string() };
        let mut it = text.split_whitespace();
        let u = it.next().and_then(|s| s.parse::<u32>().ok()).ok_or_else(malformed)?;
        let v = it.next().and_then(|s| s.parse::<u32>().ok()).ok_or_else(malformed)?;
        if it.next().is_some() {
            return Err(malformed());
        }
        edges.push((u, v));
    }
    Ok(edges)
}

/// Reads an edge-list stream into a canonical connected [`Graph`].
/// The vertex count is one more than the largest id seen.
pub fn load_graph<R: BufRead>(reader: R) -> Result<Graph> {
    let lines: Vec<String> = reader
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let edges = parse_edge_list(lines.iter().map(|s| s.as_str()), 1)?;
    let n = edges.iter().map(|&(u, v)| u.max(v) as usize + 1).max().unwrap_or(0);
    Graph::from_edges(n, edges)
}

/// Reads a JSON array of per-vertex label strings.
pub fn load_labels<R: std::io::Read>(reader: R) -> Result<Vec<String>> {
    serde_json::from_reader(reader).map_err(|e| Error::InvalidParameter(format!("labels: {e}")))
}

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> std::io::Result<()> {
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}
