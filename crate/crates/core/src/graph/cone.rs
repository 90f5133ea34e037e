//! Coning off subsets ("electrocution").
//!
//! Each subset gets a fresh apex vertex joined to all of its members. Cone
//! edges have length 1 like every other edge, so a coned subset has diameter
//! at most 2 rather than 1; coarse statements do not see the factor.

use super::Graph;
use crate::error::{Error, Result};

/// Returns the coned graph. Apex for `subsets[i]` gets id `n + i`.
pub fn cone_off(g: &Graph, subsets: &[Vec<u32>]) -> Result<Graph> {
    let n = g.vertex_count();
    let mut edges: Vec<(u32, u32)> = g.edges().collect();
    for (i, s) in subsets.iter().enumerate() {
        if s.is_empty() {
            return Err(Error::EmptySet("cone_off"));
        }
        let apex = (n + i) as u32;
        for &v in s {
            g.check_vertex(v)?;
            edges.push((apex, v));
        }
    }
    Graph::from_edges(n + subsets.len(), edges)
}
