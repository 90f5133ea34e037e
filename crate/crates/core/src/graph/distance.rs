//! Exact shortest-path distances on unit-edge graphs.
//!
//! Small graphs get a full all-pairs matrix of `u16`; larger ones answer
//! queries by BFS and keep a bounded cache of rows. Both modes return the
//! same integers.

use rayon::prelude::*;
use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use super::Graph;

/// Default vertex count up to which the full distance matrix is stored.
pub const DEFAULT_MATRIX_THRESHOLD: usize = 20_000;

const UNREACHED: u16 = u16::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    ExactMatrix,
    OnDemandBfs,
}

/// Distance storage attached to a [`Graph`].
#[derive(Debug)]
pub struct DistanceOracle {
    inner: Storage,
}

#[derive(Debug)]
enum Storage {
    Matrix { n: usize, data: Vec<u16> },
    OnDemand(RowCache),
}

#[derive(Debug)]
struct RowCache {
    capacity: usize,
    state: Mutex<CacheState>,
}

#[derive(Debug, Default)]
struct CacheState {
    rows: HashMap<u32, Arc<[u32]>>,
    order: VecDeque<u32>,
}

/// One row of the distance table: distances from a fixed source.
pub enum Row<'a> {
    Matrix(&'a [u16]),
    Owned(Arc<[u32]>),
}

impl Row<'_> {
    #[inline]
    pub fn get(&self, v: u32) -> u32 {
        match self {
            Row::Matrix(r) => r[v as usize] as u32,
            Row::Owned(r) => r[v as usize],
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Row::Matrix(r) => r.len(),
            Row::Owned(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_vec(&self) -> Vec<u32> {
        (0..self.len() as u32).map(|v| self.get(v)).collect()
    }
}

impl DistanceOracle {
    pub(crate) fn build(g: &Graph, threshold: usize) -> DistanceOracle {
        let n = g.vertex_count();
        if n <= threshold && n < UNREACHED as usize {
            DistanceOracle {
                inner: Storage::Matrix { n, data: all_pairs_matrix(g) },
            }
        } else {
            DistanceOracle {
                inner: Storage::OnDemand(RowCache {
                    capacity: 256,
                    state: Mutex::new(CacheState::default()),
                }),
            }
        }
    }

    pub fn mode(&self) -> OracleMode {
        match self.inner {
            Storage::Matrix { .. } => OracleMode::ExactMatrix,
            Storage::OnDemand(_) => OracleMode::OnDemandBfs,
        }
    }

    pub(crate) fn row<'a>(&'a self, g: &Graph, u: u32) -> Row<'a> {
        match &self.inner {
            Storage::Matrix { n, data } => {
                let s = u as usize * n;
                Row::Matrix(&data[s..s + n])
            }
            Storage::OnDemand(cache) => Row::Owned(cache.get(g, u)),
        }
    }

    #[inline]
    pub(crate) fn dist(&self, g: &Graph, u: u32, v: u32) -> u32 {
        match &self.inner {
            Storage::Matrix { n, data } => data[u as usize * n + v as usize] as u32,
            Storage::OnDemand(cache) => cache.get(g, u)[v as usize],
        }
    }
}

impl RowCache {
    fn get(&self, g: &Graph, u: u32) -> Arc<[u32]> {
        if let Some(r) = self.state.lock().unwrap().rows.get(&u) {
            return r.clone();
        }
        let row: Arc<[u32]> = bfs_u32(g, u).into();
        let mut st = self.state.lock().unwrap();
        if st.rows.len() >= self.capacity {
            if let Some(old) = st.order.pop_front() {
                st.rows.remove(&old);
            }
        }
        if st.rows.insert(u, row.clone()).is_none() {
            st.order.push_back(u);
        }
        row
    }
}

/// BFS distances from `src`; unreachable vertices get `u32::MAX`.
pub fn bfs_u32(g: &Graph, src: u32) -> Vec<u32> {
    let n = g.vertex_count();
    let mut dist = vec![u32::MAX; n];
    let mut queue = Vec::with_capacity(n);
    dist[src as usize] = 0;
    queue.push(src);
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let du = dist[u as usize] + 1;
        for &w in g.neighbors(u) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = du;
                queue.push(w);
            }
        }
    }
    dist
}

/// Words per vertex in the bit-parallel BFS.
const WORDS: usize = 4;
/// Sources handled together by one bit-parallel BFS.
const LANES: usize = 64 * WORDS;

type Mask = [u64; WORDS];

/// Distances from sources `s0..s0 + LANES` as an `n × LANES` block: entry
/// `v * LANES + i` is `d(v, s0 + i)`. A bit mask per vertex tracks which
/// sources have reached it, so each level handles all lanes at once. Levels
/// with a small frontier push along its edges; larger ones pull over all
/// vertices that some lane has not reached yet.
fn bfs_block(g: &Graph, s0: usize) -> Vec<u16> {
    let n = g.vertex_count();
    let lanes = LANES.min(n - s0);
    let mut full: Mask = [0; WORDS];
    for i in 0..lanes {
        full[i / 64] |= 1 << (i % 64);
    }
    let mut block = vec![UNREACHED; n * LANES];
    let mut seen = vec![[0u64; WORDS]; n];
    let mut frontier = vec![[0u64; WORDS]; n];
    let mut next = vec![[0u64; WORDS]; n];
    let mut active: Vec<u32> = (s0..s0 + lanes).map(|v| v as u32).collect();
    let mut touched: Vec<u32> = Vec::new();
    for i in 0..lanes {
        seen[s0 + i][i / 64] |= 1 << (i % 64);
        frontier[s0 + i][i / 64] |= 1 << (i % 64);
        block[(s0 + i) * LANES + i] = 0;
    }
    let mut level = 0u16;
    // Pushing is cheaper while the frontier is a small part of the graph.
    let push_limit = n / 2;
    while !active.is_empty() {
        level += 1;
        touched.clear();
        if active.len() <= push_limit {
            for &u in &active {
                let f = frontier[u as usize];
                for &w in g.neighbors(u) {
                    let nx = &mut next[w as usize];
                    let was_empty = *nx == [0; WORDS];
                    for k in 0..WORDS {
                        nx[k] |= f[k] & !seen[w as usize][k];
                    }
                    if was_empty && *nx != [0; WORDS] {
                        touched.push(w);
                    }
                }
            }
        } else {
            for v in 0..n {
                if seen[v] == full {
                    continue;
                }
                let mut bits: Mask = [0; WORDS];
                for &w in g.neighbors(v as u32) {
                    let f = &frontier[w as usize];
                    for k in 0..WORDS {
                        bits[k] |= f[k];
                    }
                }
                let mut any = 0;
                for k in 0..WORDS {
                    bits[k] &= !seen[v][k];
                    any |= bits[k];
                }
                if any != 0 {
                    next[v] = bits;
                    touched.push(v as u32);
                }
            }
        }
        for &u in &active {
            frontier[u as usize] = [0; WORDS];
        }
        for &v in &touched {
            let v = v as usize;
            let row = &mut block[v * LANES..(v + 1) * LANES];
            for k in 0..WORDS {
                let mut b = next[v][k];
                seen[v][k] |= b;
                while b != 0 {
                    row[k * 64 + b.trailing_zeros() as usize] = level;
                    b &= b - 1;
                }
            }
            frontier[v] = next[v];
            next[v] = [0; WORDS];
        }
        std::mem::swap(&mut active, &mut touched);
    }
    block
}

/// All-pairs BFS into a row-major `u16` matrix.
pub fn all_pairs_matrix(g: &Graph) -> Vec<u16> {
    let n = g.vertex_count();
    let mut data = vec![0u16; n * n];
    if n == 0 {
        return data;
    }
    let starts: Vec<usize> = (0..n).step_by(LANES).collect();
    let per_round = rayon::current_num_threads().max(1) * 2;
    for round in starts.chunks(per_round) {
        let blocks: Vec<(usize, Vec<u16>)> = round.par_iter().map(|&s0| (s0, bfs_block(g, s0))).collect();
        // The metric is symmetric, so column block `s0..` of every row comes from the block.
        for (s0, block) in blocks {
            let lanes = LANES.min(n - s0);
            for v in 0..n {
                data[v * n + s0..v * n + s0 + lanes].copy_from_slice(&block[v * LANES..v * LANES + lanes]);
            }
        }
    }
    data
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators;

    #[test]
    fn on_demand_matches_matrix() {
        let g = generators::grid(6, 7);
        let lazy = g.clone().with_matrix_threshold(0);
        assert_eq!(g.oracle().mode(), OracleMode::ExactMatrix);
        assert_eq!(lazy.oracle().mode(), OracleMode::OnDemandBfs);
        for u in 0..g.vertex_count() as u32 {
            for v in 0..g.vertex_count() as u32 {
                assert_eq!(g.dist(u, v), lazy.dist(u, v));
            }
        }
    }

    #[test]
    fn bit_parallel_rows_match_single_source_bfs() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let mut edges: Vec<(u32, u32)> = generators::random_connected(600, 300, &mut rng).edges().collect();
        // A second component past the first block boundary.
        edges.extend((600..640).map(|v| (v, v + 1)));
        let g = Graph::from_edges_unchecked(641, edges).unwrap();
        let m = all_pairs_matrix(&g);
        for s in 0..641u32 {
            let want: Vec<u16> = bfs_u32(&g, s).iter().map(|&d| if d == u32::MAX { UNREACHED } else { d as u16 }).collect();
            assert_eq!(&m[s as usize * 641..(s as usize + 1) * 641], &want[..], "source {s}");
        }
    }

    #[test]
    fn cache_eviction_keeps_answers_exact() {
        let g = generators::cycle(600).with_matrix_threshold(10);
        for u in 0..600u32 {
            assert_eq!(g.dist(u, (u + 300) % 600), 300);
        }
        assert_eq!(g.dist(0, 1), 1);
    }
}
