//! Points of the metric graph: vertices and edge midpoints.
//!
//! Every distance between such points is a multiple of ½, so it is stored in
//! half-units. Suprema of distance-to-a-subgraph functions along edges are
//! attained at vertices or midpoints, which makes these points enough for
//! exact slimness computations.

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

/// A vertex or the midpoint of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricPoint {
    Vertex(u32),
    /// Midpoint of the edge `(a, b)`, stored with `a < b`.
    Midpoint(u32, u32),
}

impl MetricPoint {
    pub fn midpoint(a: u32, b: u32) -> MetricPoint {
        MetricPoint::Midpoint(a.min(b), a.max(b))
    }

    /// Twice the distance between two points.
    pub fn dist2(self, g: &Graph, other: MetricPoint) -> u32 {
        use MetricPoint::*;
        match (self, other) {
            (Vertex(u), Vertex(v)) => 2 * g.dist(u, v),
            (Vertex(v), Midpoint(a, b)) | (Midpoint(a, b), Vertex(v)) => 1 + 2 * g.dist(v, a).min(g.dist(v, b)),
            (Midpoint(a, b), Midpoint(c, d)) => {
                if (a, b) == (c, d) {
                    0
                } else {
                    let m = g.dist(a, c).min(g.dist(a, d)).min(g.dist(b, c)).min(g.dist(b, d));
                    2 + 2 * m
                }
            }
        }
    }

    /// The endpoint vertex for vertices; the endpoint nearer `toward` for midpoints
    /// (lower id on ties).
    pub fn snap(self, g: &Graph, toward: u32) -> u32 {
        match self {
            MetricPoint::Vertex(v) => v,
            MetricPoint::Midpoint(a, b) => {
                if g.dist(toward, b) < g.dist(toward, a) {
                    b
                } else {
                    a
                }
            }
        }
    }
}

/// Points along a vertex path, indexed by half-unit arc length.
pub(crate) fn path_points(path: &[u32]) -> Vec<MetricPoint> {
    let mut out = Vec::with_capacity(path.len() * 2);
    for (i, &v) in path.iter().enumerate() {
        if i > 0 {
            out.push(MetricPoint::midpoint(path[i - 1], v));
        }
        out.push(MetricPoint::Vertex(v));
    }
    out
}

/// All points lying on some geodesic from `x` to `y`, grouped by twice
/// their distance from `x` (so `levels.len() == 2 d(x,y) + 1`).
pub(crate) fn interval_levels(g: &Graph, x: u32, y: u32) -> Vec<Vec<MetricPoint>> {
    let rx = g.row(x);
    let ry = g.row(y);
    let d = rx.get(y);
    let mut levels = vec![Vec::new(); 2 * d as usize + 1];
    for v in g.vertices() {
        let dx = rx.get(v);
        if dx + ry.get(v) != d {
            continue;
        }
        levels[2 * dx as usize].push(MetricPoint::Vertex(v));
        for &w in g.neighbors(v) {
            if rx.get(w) == dx + 1 && ry.get(w) + dx + 1 == d {
                levels[2 * dx as usize + 1].push(MetricPoint::midpoint(v, w));
            }
        }
    }
    levels
}

/// Every geodesic from `x` to `y` passes through the point sets of
/// [`interval_levels`]; these are the vertices of the geodesic DAG in order
/// of distance from `x`.
pub(crate) fn interval_vertices(g: &Graph, x: u32, y: u32) -> Vec<u32> {
    let rx = g.row(x);
    let ry = g.row(y);
    let d = rx.get(y);
    let mut vs: Vec<u32> = g.vertices().filter(|&v| rx.get(v) + ry.get(v) == d).collect();
    vs.sort_by_key(|&v| (rx.get(v), v));
    vs
}
