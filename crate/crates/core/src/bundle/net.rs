//! Metric graph bundles approximating sampled metric bundles.
//!
//! The base net is a greedy 1-separated subset of the base samples (in index
//! order) with edges between net points at distance at most 3. Each fiber over
//! a net point gets a greedy 1-separated net in its intrinsic metric; two
//! fiber-net points are joined when their total distance is at most `6c + 3`
//! and they lie in the same fiber or over adjacent base-net points.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{verify_bundle, MetricGraphBundle};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const BASE_EDGE_THRESHOLD: f64 = 3.0;

/// A finite sample of a metric bundle.
pub trait SampledBundle {
    /// Number of total-space sample points.
    fn point_count(&self) -> usize;
    fn base_count(&self) -> usize;
    /// Total-space distance.
    fn dist(&self, i: usize, j: usize) -> f64;
    /// Intrinsic distance between two points of the same fiber.
    fn fiber_dist(&self, i: usize, j: usize) -> f64;
    /// Base sample under point `i`.
    fn base_of(&self, i: usize) -> usize;
    fn base_dist(&self, a: usize, b: usize) -> f64;
    fn label(&self, _i: usize) -> Option<String> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetParams {
    /// Bundle constant `c`; fiber and cross edges use the threshold `6c + 3`.
    pub c: f64,
}

impl NetParams {
    pub fn edge_threshold(&self) -> f64 {
        6.0 * self.c + 3.0
    }
}

fn greedy_net(candidates: &[usize], dist: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    let mut net: Vec<usize> = Vec::new();
    for &p in candidates {
        if net.iter().all(|&q| dist(p, q) >= 1.0) {
            net.push(p);
        }
    }
    net
}

pub fn net_approximation<S: SampledBundle + ?Sized>(s: &S, params: NetParams) -> Result<MetricGraphBundle> {
    if params.c <= 0.0 {
        return Err(Error::InvalidParameter(format!("bundle constant c = {}", params.c)));
    }
    let base_idx: Vec<usize> = (0..s.base_count()).collect();
    let base_net = greedy_net(&base_idx, |a, b| s.base_dist(a, b));
    let mut base_edges = Vec::new();
    for i in 0..base_net.len() {
        for j in i + 1..base_net.len() {
            if s.base_dist(base_net[i], base_net[j]) <= BASE_EDGE_THRESHOLD {
                base_edges.push((i as u32, j as u32));
            }
        }
    }
    let base = Graph::from_edges(base_net.len(), base_edges)?;

    let mut by_base: Vec<Vec<usize>> = vec![Vec::new(); s.base_count()];
    for i in 0..s.point_count() {
        by_base[s.base_of(i)].push(i);
    }
    let mut points: Vec<usize> = Vec::new();
    let mut proj: Vec<u32> = Vec::new();
    let mut fiber_ranges = Vec::with_capacity(base_net.len());
    for (bi, &bs) in base_net.iter().enumerate() {
        if by_base[bs].is_empty() {
            return Err(Error::EmptyNetFiber(bi as u32));
        }
        let net = greedy_net(&by_base[bs], |a, b| s.fiber_dist(a, b));
        let start = points.len();
        points.extend(&net);
        proj.extend(std::iter::repeat(bi as u32).take(net.len()));
        fiber_ranges.push(start..points.len());
    }

    let threshold = params.edge_threshold();
    let mut edges = Vec::new();
    for (bi, range) in fiber_ranges.iter().enumerate() {
        for i in range.clone() {
            for j in i + 1..range.end {
                if s.dist(points[i], points[j]) <= threshold {
                    edges.push((i as u32, j as u32));
                }
            }
            for &bj in base.neighbors(bi as u32) {
                if (bj as usize) < bi {
                    continue;
                }
                for j in fiber_ranges[bj as usize].clone() {
                    if s.dist(points[i], points[j]) <= threshold {
                        edges.push((i as u32, j as u32));
                    }
                }
            }
        }
    }
    let total = Graph::from_edges_unchecked(points.len(), edges)?;
    let labels: Option<Vec<String>> = points.iter().map(|&p| s.label(p)).collect();
    let total = match labels {
        Some(l) => total.with_labels(l)?,
        None => total,
    };
    let bundle = verify_bundle(total.clone(), base, proj)?;
    if let Some(unreached) = bfs_unreached(&total) {
        return Err(Error::Disconnected { unreached });
    }
    Ok(bundle.with_provenance(json!({
        "generator": "net",
        "c": params.c,
        "base_threshold": BASE_EDGE_THRESHOLD,
        "edge_threshold": threshold,
        "sample_points": s.point_count(),
    })))
}

fn bfs_unreached(g: &Graph) -> Option<u32> {
    let d = crate::graph::bfs_u32(g, 0);
    d.iter().position(|&x| x == u32::MAX).map(|i| i as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Unit grid points over a segment, each fiber a short unit grid.
    struct Strip {
        len: usize,
        width: usize,
    }

    impl SampledBundle for Strip {
        fn point_count(&self) -> usize {
            self.len * self.width
        }
        fn base_count(&self) -> usize {
            self.len
        }
        fn dist(&self, i: usize, j: usize) -> f64 {
            let (a, b) = ((i / self.width) as f64, (i % self.width) as f64);
            let (c, d) = ((j / self.width) as f64, (j % self.width) as f64);
            ((a - c).powi(2) + (b - d).powi(2)).sqrt()
        }
        fn fiber_dist(&self, i: usize, j: usize) -> f64 {
            ((i % self.width) as f64 - (j % self.width) as f64).abs()
        }
        fn base_of(&self, i: usize) -> usize {
            i / self.width
        }
        fn base_dist(&self, a: usize, b: usize) -> f64 {
            (a as f64 - b as f64).abs()
        }
    }

    #[test]
    fn segment_gives_interval_graph() {
        let s = Strip { len: 6, width: 3 };
        let b = net_approximation(&s, NetParams { c: 1.0 }).unwrap();
        assert_eq!(b.base().vertex_count(), 6);
        for (u, v) in b.base().edges() {
            assert!(v - u <= 3);
        }
        assert_eq!(b.base().edge_count(), 5 + 4 + 3);
        assert_eq!(b.total().vertex_count(), 18);
    }

    struct Holey;

    impl SampledBundle for Holey {
        fn point_count(&self) -> usize {
            2
        }
        fn base_count(&self) -> usize {
            3
        }
        fn dist(&self, _: usize, _: usize) -> f64 {
            1.0
        }
        fn fiber_dist(&self, _: usize, _: usize) -> f64 {
            0.0
        }
        fn base_of(&self, i: usize) -> usize {
            [0, 2][i]
        }
        fn base_dist(&self, a: usize, b: usize) -> f64 {
            (a as f64 - b as f64).abs()
        }
    }

    #[test]
    fn empty_fiber_is_an_error() {
        assert_eq!(net_approximation(&Holey, NetParams { c: 1.0 }).unwrap_err(), Error::EmptyNetFiber(1));
    }
}
