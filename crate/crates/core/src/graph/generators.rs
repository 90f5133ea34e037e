//! Small standard graphs used as fibers, bases and test corpora.

use rand::Rng;

use super::Graph;

/// Path graph `0 – 1 – … – (n-1)`.
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n as u32).map(|i| (i - 1, i))).expect("path is connected")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::from_edges(n, (0..n as u32).map(|i| (i, (i + 1) % n as u32))).expect("cycle is connected")
}

/// `w × h` grid; vertex `(x, y)` has id `y * w + x`.
pub fn grid(w: usize, h: usize) -> Graph {
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = (y * w + x) as u32;
            if x + 1 < w {
                edges.push((v, v + 1));
            }
            if y + 1 < h {
                edges.push((v, v + w as u32));
            }
        }
    }
    Graph::from_edges(w * h, edges).expect("grid is connected")
}

/// Complete `arity`-ary tree of the given depth, breadth-first ids.
pub fn tree(arity: usize, depth: usize) -> Graph {
    let mut edges = Vec::new();
    let mut level_start = 0u32;
    let mut level_len = 1u32;
    let mut next = 1u32;
    for _ in 0..depth {
        for p in level_start..level_start + level_len {
            for _ in 0..arity {
                edges.push((p, next));
                next += 1;
            }
        }
        level_start += level_len;
        level_len *= arity as u32;
    }
    Graph::from_edges(next as usize, edges).expect("tree is connected")
}

pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves as u32).map(|i| (0, i))).expect("star is connected")
}

/// Random connected graph: a random spanning tree plus `extra` random edges.
pub fn random_connected<R: Rng>(n: usize, extra: usize, rng: &mut R) -> Graph {
    let mut edges = Vec::with_capacity(n + extra);
    for v in 1..n as u32 {
        edges.push((rng.gen_range(0..v), v));
    }
    if n >= 2 {
        for _ in 0..extra {
            let u = rng.gen_range(0..n as u32);
            let v = rng.gen_range(0..n as u32);
            if u != v {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("spanning tree keeps it connected")
}

/// Random connected graph with roughly `avg_degree` average degree.
pub fn random_sparse<R: Rng>(n: usize, avg_degree: f64, rng: &mut R) -> Graph {
    let extra = ((avg_degree / 2.0 - 1.0).max(0.0) * n as f64) as usize;
    random_connected(n, extra, rng)
}
