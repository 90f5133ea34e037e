//! Plain-text bundle files.
//!
//! ```text
//! TOTAL
//! 0 1
//! ...
//! FIBER
//! 0 0      # vertex base
//! ...
//! BASE
//! 0 1
//! BOUNDARY # optional
//! 7
//! ```

use std::io::{BufRead, Write};

use super::{verify_bundle, MetricGraphBundle};
use crate::error::{Error, Result};
use crate::graph::{parse_edge_list, Graph};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Total,
    Fiber,
    Base,
    Boundary,
}

pub fn read_bundle<R: BufRead>(reader: R) -> Result<MetricGraphBundle> {
    let lines: Vec<String> = reader
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::BundleFormat(e.to_string()))?;
    let mut current: Option<Section> = None;
    let mut chunks: Vec<(Section, usize, Vec<&str>)> = Vec::new();
    for (i, raw) in lines.iter().enumerate() {
        let header = match raw.split('#').next().unwrap_or("").trim() {
            "TOTAL" => Some(Section::Total),
            "FIBER" => Some(Section::Fiber),
            "BASE" => Some(Section::Base),
            "BOUNDARY" => Some(Section::Boundary),
            _ => None,
        };
        if let Some(s) = header {
            current = Some(s);
            chunks.push((s, i + 2, Vec::new()));
            continue;
        }
        match (current, chunks.last_mut()) {
            (Some(_), Some(chunk)) => chunk.2.push(raw),
            _ => {
                if !raw.split('#').next().unwrap_or("").trim().is_empty() {
                    return Err(Error::BundleFormat(format!("line {}: data before a section header", i + 1)));
                }
            }
        }
    }
    let mut total_edges = Vec::new();
    let mut fiber_pairs = Vec::new();
    let mut base_edges = Vec::new();
    let mut boundary = Vec::new();
    for (s, first, body) in chunks {
        match s {
            Section::Total => total_edges.extend(parse_edge_list(body, first)?),
            Section::Fiber => fiber_pairs.extend(parse_edge_list(body, first)?),
            Section::Base => base_edges.extend(parse_edge_list(body, first)?),
            Section::Boundary => {
                for (i, raw) in body.iter().enumerate() {
                    let text = raw.split('#').next().unwrap_or("").trim();
                    if text.is_empty() {
                        continue;
                    }
                    let v = text.parse::<u32>().map_err(|_| Error::MalformedLine {
                        line: first + i,
                        text: raw.trim().to_string(),
                    })?;
                    boundary.push(v);
                }
            }
        }
    }
    let count = |ids: &mut dyn Iterator<Item = u32>| ids.map(|x| x as usize + 1).max().unwrap_or(0);
    let n = count(&mut total_edges.iter().flat_map(|&(u, v)| [u, v]).chain(fiber_pairs.iter().map(|p| p.0)));
    let nb = count(&mut base_edges.iter().flat_map(|&(u, v)| [u, v]).chain(fiber_pairs.iter().map(|p| p.1)));
    let mut proj = vec![u32::MAX; n];
    for &(v, b) in &fiber_pairs {
        if proj[v as usize] != u32::MAX && proj[v as usize] != b {
            return Err(Error::BundleFormat(format!("vertex {v} listed over two base vertices")));
        }
        proj[v as usize] = b;
    }
    if let Some(v) = proj.iter().position(|&b| b == u32::MAX) {
        return Err(Error::BundleFormat(format!("vertex {v} has no FIBER entry")));
    }
    let total = Graph::from_edges_unchecked(n, total_edges)?;
    let base = Graph::from_edges(nb, base_edges)?;
    let bundle = verify_bundle(total, base, proj)?;
    let mut flags = vec![false; n];
    for v in boundary {
        *flags
            .get_mut(v as usize)
            .ok_or(Error::InvalidVertex { id: v, count: n })? = true;
    }
    bundle.with_boundary(flags)
}

pub fn write_bundle<W: Write>(b: &MetricGraphBundle, mut w: W) -> std::io::Result<()> {
    writeln!(w, "TOTAL")?;
    for (u, v) in b.total().edges() {
        writeln!(w, "{u} {v}")?;
    }
    writeln!(w, "FIBER")?;
    for (v, p) in b.projection().iter().enumerate() {
        writeln!(w, "{v} {p}")?;
    }
    writeln!(w, "BASE")?;
    for (u, v) in b.base().edges() {
        writeln!(w, "{u} {v}")?;
    }
    if b.boundary_flags().iter().any(|&f| f) {
        writeln!(w, "BOUNDARY")?;
        for (v, _) in b.boundary_flags().iter().enumerate().filter(|(_, &f)| f) {
            writeln!(w, "{v}")?;
        }
    }
    Ok(())
}
