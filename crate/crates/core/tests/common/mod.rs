//! Independent brute-force oracles shared by the integration tests.
//!
//! Nothing here calls the library's distance oracle or geodesic code: graphs
//! are read through `neighbors` only and every distance is recomputed by a
//! plain BFS.
#![allow(dead_code)]

use std::collections::VecDeque;

use coarse_bundles::graph::Graph;

pub fn bfs(adj: &[Vec<u32>], src: usize) -> Vec<u32> {
    let mut d = vec![u32::MAX; adj.len()];
    let mut q = VecDeque::new();
    d[src] = 0;
    q.push_back(src);
    while let Some(u) = q.pop_front() {
        for &w in &adj[u] {
            if d[w as usize] == u32::MAX {
                d[w as usize] = d[u] + 1;
                q.push_back(w as usize);
            }
        }
    }
    d
}

pub fn adjacency(g: &Graph) -> Vec<Vec<u32>> {
    g.vertices().map(|v| g.neighbors(v).to_vec()).collect()
}

pub fn all_pairs(g: &Graph) -> Vec<Vec<u32>> {
    let adj = adjacency(g);
    (0..adj.len()).map(|s| bfs(&adj, s)).collect()
}

/// Graph with every edge subdivided; vertex ids kept, midpoints appended.
/// Distances in it are twice the metric-graph distances.
pub struct Subdivided {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
    pub dist: Vec<Vec<u32>>,
}

impl Subdivided {
    pub fn new(g: &Graph) -> Subdivided {
        let n = g.vertex_count();
        let edges: Vec<(u32, u32)> = g.edges().collect();
        let mut adj = vec![Vec::new(); n + edges.len()];
        for (i, &(a, b)) in edges.iter().enumerate() {
            let m = (n + i) as u32;
            adj[a as usize].push(m);
            adj[b as usize].push(m);
            adj[n + i].push(a);
            adj[n + i].push(b);
        }
        let dist = (0..adj.len()).map(|s| bfs(&adj, s)).collect();
        Subdivided { n, edges, dist }
    }

    pub fn mid(&self, a: u32, b: u32) -> usize {
        let key = (a.min(b), a.max(b));
        self.n + self.edges.iter().position(|&e| e == key).unwrap()
    }

    /// Subdivided ids of every point (vertices and midpoints) on a vertex path.
    pub fn points(&self, path: &[u32]) -> Vec<usize> {
        let mut out = vec![path[0] as usize];
        for w in path.windows(2) {
            out.push(self.mid(w[0], w[1]));
            out.push(w[1] as usize);
        }
        out
    }
}

/// Every geodesic from `x` to `y`, as vertex lists.
pub fn all_geodesics(adj: &[Vec<u32>], d: &[Vec<u32>], x: u32, y: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![x];
    fn rec(adj: &[Vec<u32>], d: &[Vec<u32>], y: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let v = *cur.last().unwrap();
        if v == y {
            out.push(cur.clone());
            return;
        }
        for &w in &adj[v as usize] {
            if d[w as usize][y as usize] + 1 == d[v as usize][y as usize] {
                cur.push(w);
                rec(adj, d, y, cur, out);
                cur.pop();
            }
        }
    }
    rec(adj, d, y, &mut cur, &mut out);
    out
}

/// Twice the slimness of a triangle with the given sides (as point-id lists).
pub fn slim2_of(sub: &Subdivided, sides: [&[usize]; 3]) -> u32 {
    let mut best = 0;
    for k in 0..3 {
        for &p in sides[k] {
            let mut m = u32::MAX;
            for (o, side) in sides.iter().enumerate() {
                if o != k {
                    for &q in side.iter() {
                        m = m.min(sub.dist[p][q]);
                    }
                }
            }
            best = best.max(m);
        }
    }
    best
}

/// Twice the slim constant over every triangle and every choice of geodesic sides.
pub fn brute_delta_slim2(g: &Graph) -> u32 {
    let adj = adjacency(g);
    let d: Vec<Vec<u32>> = (0..adj.len()).map(|s| bfs(&adj, s)).collect();
    let sub = Subdivided::new(g);
    let n = g.vertex_count() as u32;
    let mut geos: Vec<Vec<Vec<Vec<usize>>>> = vec![vec![Vec::new(); n as usize]; n as usize];
    for x in 0..n {
        for y in 0..n {
            geos[x as usize][y as usize] =
                all_geodesics(&adj, &d, x, y).iter().map(|p| sub.points(p)).collect();
        }
    }
    let mut best = 0;
    for a in 0..n as usize {
        for b in a..n as usize {
            for c in b..n as usize {
                for s0 in &geos[a][b] {
                    for s1 in &geos[b][c] {
                        for s2 in &geos[a][c] {
                            best = best.max(slim2_of(&sub, [s0, s1, s2]));
                        }
                    }
                }
            }
        }
    }
    best
}

/// Twice the four-point constant by scanning every quadruple.
pub fn brute_delta_4pt2(g: &Graph) -> u32 {
    let d = all_pairs(g);
    let n = d.len();
    let mut best = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for e in c + 1..n {
                    let mut s = [d[a][b] + d[c][e], d[a][c] + d[b][e], d[a][e] + d[b][c]];
                    s.sort_unstable();
                    best = best.max(s[2] - s[1]);
                }
            }
        }
    }
    best
}

/// Random connected graph from a seed, built without the library's generators.
pub fn random_graph(n: usize, extra: usize, seed: u64) -> Graph {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = |m: u64| {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) % m
    };
    let mut edges = Vec::new();
    for v in 1..n as u64 {
        edges.push((next(v) as u32, v as u32));
    }
    for _ in 0..extra {
        let (u, v) = (next(n as u64) as u32, next(n as u64) as u32);
        if u != v {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}
