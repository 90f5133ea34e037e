//! Finite connected graphs with unit edge lengths.
//!
//! Everything downstream (bases, fibers, total spaces, ladder neighborhoods)
//! is a [`Graph`]. Adjacency is stored in CSR form with sorted neighbor lists;
//! distances come from a lazily built [`DistanceOracle`].
//!
//! Geodesics are made deterministic by walking from the source and always
//! stepping to the lowest-numbered neighbor that is one step closer to the
//! target.

mod cone;
mod distance;
pub mod generators;
mod io;

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub use cone::cone_off;
pub use distance::{all_pairs_matrix, bfs_u32, DistanceOracle, OracleMode, Row, DEFAULT_MATRIX_THRESHOLD};
pub use io::{load_graph, load_labels, parse_edge_list, write_edge_list};

pub type Vertex = u32;

/// Connected, undirected, loop-free graph with unit edges.
#[derive(Clone)]
pub struct Graph {
    offsets: Vec<u32>,
    targets: Vec<u32>,
    labels: Option<Arc<Vec<String>>>,
    matrix_threshold: usize,
    oracle: OnceLock<Arc<DistanceOracle>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertex_count())
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Graph) -> bool {
        self.offsets == other.offsets && self.targets == other.targets
    }
}

impl Graph {
    /// Builds a graph from an edge list, deduplicating parallel and reversed
    /// edges. Fails on self-loops, out-of-range ids or disconnected input.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Graph> {
        let g = Graph::from_edges_unchecked(n, edges)?;
        if let Some(unreached) = g.first_unreached() {
            return Err(Error::Disconnected { unreached });
        }
        Ok(g)
    }

    /// Same as [`Graph::from_edges`] but without the connectivity check.
    pub(crate) fn from_edges_unchecked(
        n: usize,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Graph> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(Error::InvalidVertex { id: x, count: n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(list);
            offsets.push(targets.len() as u32);
        }
        Ok(Graph {
            offsets,
            targets,
            labels: None,
            matrix_threshold: DEFAULT_MATRIX_THRESHOLD,
            oracle: OnceLock::new(),
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph> {
        if labels.len() != self.vertex_count() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.vertex_count()
            )));
        }
        self.labels = Some(Arc::new(labels));
        Ok(self)
    }

    /// Sets the vertex count above which distances are answered by on-demand BFS.
    pub fn with_matrix_threshold(mut self, threshold: usize) -> Graph {
        self.matrix_threshold = threshold;
        self.oracle = OnceLock::new();
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref().map(|v| v.as_slice())
    }

    pub fn label(&self, v: Vertex) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v as usize].as_str())
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[u32] {
        let (a, b) = (self.offsets[v as usize], self.offsets[v as usize + 1]);
        &self.targets[a as usize..b as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<u32> {
        0..self.vertex_count() as u32
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.vertices()
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if (v as usize) < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex { id: v, count: self.vertex_count() })
        }
    }

    fn first_unreached(&self) -> Option<u32> {
        let d = bfs_u32(self, 0);
        d.iter().position(|&x| x == u32::MAX).map(|i| i as u32)
    }

    pub fn oracle(&self) -> &DistanceOracle {
        self.oracle
            .get_or_init(|| Arc::new(DistanceOracle::build(self, self.matrix_threshold)))
    }

    /// Distance without id validation.
    #[inline]
    pub fn dist(&self, u: Vertex, v: Vertex) -> u32 {
        self.oracle().dist(self, u, v)
    }

    pub fn row(&self, u: Vertex) -> Row<'_> {
        self.oracle().row(self, u)
    }

    pub fn distance(&self, u: Vertex, v: Vertex) -> Result<u32> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.dist(u, v))
    }

    /// Canonical geodesic from `u` to `v`.
    pub fn geodesic(&self, u: Vertex, v: Vertex) -> Result<Path> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.geodesic_unchecked(u, v))
    }

    pub(crate) fn geodesic_unchecked(&self, u: Vertex, v: Vertex) -> Path {
        let target = self.row(v);
        let mut cur = u;
        let mut d = target.get(u);
        let mut out = Vec::with_capacity(d as usize + 1);
        out.push(u);
        while d > 0 {
            cur = *self
                .neighbors(cur)
                .iter()
                .find(|&&w| target.get(w) + 1 == d)
                .expect("distance table is consistent");
            d -= 1;
            out.push(cur);
        }
        Path(out)
    }

    /// Vertices within `radius` of `center`, ascending.
    pub fn ball(&self, center: Vertex, radius: u32) -> Result<Vec<u32>> {
        self.check_vertex(center)?;
        let row = self.row(center);
        Ok(self.vertices().filter(|&v| row.get(v) <= radius).collect())
    }

    /// Distance from every vertex to the nearest member of `sources`,
    /// explored up to `max_radius` (farther vertices get `u32::MAX`).
    pub fn multi_source_bfs(&self, sources: &[u32], max_radius: u32) -> Vec<u32> {
        let n = self.vertex_count();
        let mut dist = vec![u32::MAX; n];
        let mut queue = Vec::with_capacity(n);
        for &s in sources {
            if dist[s as usize] != 0 {
                dist[s as usize] = 0;
                queue.push(s);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            let du = dist[u as usize];
            if du >= max_radius {
                continue;
            }
            for &w in self.neighbors(u) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du + 1;
                    queue.push(w);
                }
            }
        }
        dist
    }

    /// `N_radius(set)`, ascending.
    pub fn neighborhood(&self, set: &[u32], radius: u32) -> Vec<u32> {
        let d = self.multi_source_bfs(set, radius);
        self.vertices().filter(|&v| d[v as usize] != u32::MAX).collect()
    }

    pub fn diameter(&self) -> u32 {
        self.vertices()
            .map(|u| {
                let r = self.row(u);
                self.vertices().map(|v| r.get(v)).max().unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// Induced subgraph on `vertices` (any order; duplicates ignored).
    /// Fails with [`Error::Disconnected`] naming a global vertex when the
    /// induced graph is not connected.
    pub fn induced(&self, vertices: &[u32]) -> Result<Induced> {
        let set: BTreeSet<u32> = vertices.iter().copied().collect();
        if set.is_empty() {
            return Err(Error::EmptySet("induced"));
        }
        let global: Vec<u32> = set.into_iter().collect();
        let mut local = vec![u32::MAX; self.vertex_count()];
        for (i, &v) in global.iter().enumerate() {
            self.check_vertex(v)?;
            local[v as usize] = i as u32;
        }
        let mut edges = Vec::new();
        for (i, &v) in global.iter().enumerate() {
            for &w in self.neighbors(v) {
                let j = local[w as usize];
                if j != u32::MAX && (i as u32) < j {
                    edges.push((i as u32, j));
                }
            }
        }
        let graph = Graph::from_edges_unchecked(global.len(), edges)?;
        if let Some(u) = graph.first_unreached() {
            return Err(Error::Disconnected { unreached: global[u as usize] });
        }
        Ok(Induced { graph, global, local })
    }

    pub fn is_connected_subset(&self, vertices: &[u32]) -> bool {
        self.induced(vertices).is_ok()
    }
}

/// An induced subgraph together with its id translation tables.
#[derive(Debug, Clone)]
pub struct Induced {
    pub graph: Graph,
    /// local id -> global id
    pub global: Vec<u32>,
    /// global id -> local id (`u32::MAX` when absent)
    local: Vec<u32>,
}

impl Induced {
    pub fn local(&self, v: u32) -> Option<u32> {
        self.local.get(v as usize).copied().filter(|&l| l != u32::MAX)
    }

    pub fn contains(&self, v: u32) -> bool {
        self.local(v).is_some()
    }

    /// Canonical geodesic inside the subgraph, reported in global ids.
    pub fn geodesic(&self, u: u32, v: u32) -> Option<Path> {
        let (a, b) = (self.local(u)?, self.local(v)?);
        let p = self.graph.geodesic_unchecked(a, b);
        Some(Path(p.0.iter().map(|&x| self.global[x as usize]).collect()))
    }

    pub fn dist(&self, u: u32, v: u32) -> Option<u32> {
        Some(self.graph.dist(self.local(u)?, self.local(v)?))
    }
}

/// A sequence of vertices with consecutive entries adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path(pub Vec<u32>);

impl Path {
    /// Checks adjacency of consecutive vertices.
    pub fn new(g: &Graph, vertices: Vec<u32>) -> Result<Path> {
        if vertices.is_empty() {
            return Err(Error::EmptySet("path"));
        }
        for &v in &vertices {
            g.check_vertex(v)?;
        }
        for w in vertices.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(Error::InvalidParameter(format!("{} and {} are not adjacent", w[0], w[1])));
            }
        }
        Ok(Path(vertices))
    }

    pub fn single(v: u32) -> Path {
        Path(vec![v])
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn start(&self) -> u32 {
        self.0[0]
    }

    pub fn end(&self) -> u32 {
        *self.0.last().unwrap()
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.0.clone();
        v.reverse();
        Path(v)
    }
}
