//! Horocycle bundle of the hyperbolic plane.
//!
//! In the upper half-plane, the base is the vertical geodesic `x = 0`
//! parametrized by `t = ln y`, and the fiber over `t` is the horocycle
//! `y = e^t` with intrinsic metric `|Δx| / y`. Points are indexed by the
//! intrinsic coordinate `u = x e^{-t}`, so moving along a vertical flow line
//! from `t` to `t + h` scales `u` by `e^{-h}`.

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::net::SampledBundle;
use super::{verify_bundle, MetricGraphBundle};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorocycleSpec {
    /// Base runs over `t ∈ [-T, T]`.
    pub radius: f64,
    /// Intrinsic width of every fiber.
    pub width: f64,
    pub mesh: f64,
}

impl Default for HorocycleSpec {
    fn default() -> Self {
        HorocycleSpec { radius: 6.0, width: 32.0, mesh: 1.0 }
    }
}

impl HorocycleSpec {
    fn validate(&self) -> Result<()> {
        let ok = self.radius > 0.0
            && self.width > 0.0
            && self.mesh > 0.0
            && self.mesh <= 1.0
            && self.width >= self.mesh
            && self.radius.is_finite()
            && self.width.is_finite();
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "degenerate horocycle mesh: T = {}, W = {}, h = {}",
                self.radius, self.width, self.mesh
            )));
        }
        Ok(())
    }

    /// Number of base points.
    pub fn levels(&self) -> usize {
        (2.0 * self.radius / self.mesh).round() as usize + 1
    }

    /// Number of points per fiber.
    pub fn fiber_points(&self) -> usize {
        (self.width / self.mesh).round() as usize + 1
    }

    pub fn t(&self, i: usize) -> f64 {
        -self.radius + i as f64 * self.mesh
    }

    pub fn u(&self, j: usize) -> f64 {
        -self.width / 2.0 + j as f64 * self.mesh
    }

    /// Index of the fiber point nearest to intrinsic coordinate `u`, clamped.
    pub fn nearest(&self, u: f64) -> usize {
        let j = ((u + self.width / 2.0) / self.mesh).round();
        j.clamp(0.0, (self.fiber_points() - 1) as f64) as usize
    }

    /// Bundle constant assigned to the mesh: `ceil(3 h K)` with sampling Lipschitz bound `K = 1`.
    pub fn bundle_constant(&self) -> f64 {
        (3.0 * self.mesh * MESH_LIPSCHITZ).ceil()
    }
}

const MESH_LIPSCHITZ: f64 = 1.0;

/// Graph mesh of the horocycle bundle.
///
/// Vertex `(i, j)` has id `i * m + j` where `m` is the fiber size. Fibers are
/// paths; each vertex is joined to the nearest point of the flow line through
/// it in both neighboring fibers. The two end vertices of every fiber are
/// flagged as boundary.
pub fn generate_horocycle_bundle(spec: &HorocycleSpec) -> Result<MetricGraphBundle> {
    spec.validate()?;
    let (nt, m) = (spec.levels(), spec.fiber_points());
    let id = |i: usize, j: usize| (i * m + j) as u32;
    let shrink = (-spec.mesh).exp();
    let mut edges = Vec::new();
    for i in 0..nt {
        for j in 0..m {
            if j + 1 < m {
                edges.push((id(i, j), id(i, j + 1)));
            }
            if i + 1 < nt {
                edges.push((id(i, j), id(i + 1, spec.nearest(spec.u(j) * shrink))));
                edges.push((id(i + 1, j), id(i, spec.nearest(spec.u(j) / shrink))));
            }
        }
    }
    let labels = (0..nt)
        .flat_map(|i| {
            (0..m).map(move |j| format!("({:.3},{:.3})", spec.u(j) * spec.t(i).exp(), spec.t(i)))
        })
        .collect();
    let total = Graph::from_edges(nt * m, edges)?.with_labels(labels)?;
    let base = crate::graph::generators::path(nt);
    let proj = (0..nt * m).map(|v| (v / m) as u32).collect();
    let boundary = (0..nt * m).map(|v| v % m == 0 || v % m == m - 1).collect();
    Ok(verify_bundle(total, base, proj)?.with_boundary(boundary)?.with_provenance(json!({
        "generator": "horocycle",
        "radius": spec.radius,
        "width": spec.width,
        "mesh": spec.mesh,
        "levels": nt,
        "fiber_points": m,
        "k_mesh": MESH_LIPSCHITZ,
        "c": spec.bundle_constant(),
    })))
}

/// The same grid of points as a sampled metric bundle with the hyperbolic metric.
#[derive(Debug, Clone)]
pub struct HorocycleSample {
    pub spec: HorocycleSpec,
    levels: usize,
    m: usize,
}

impl HorocycleSample {
    pub fn new(spec: HorocycleSpec) -> Result<HorocycleSample> {
        spec.validate()?;
        Ok(HorocycleSample { spec, levels: spec.levels(), m: spec.fiber_points() })
    }

    /// Upper half-plane coordinates `(x, y)` of point `i`.
    pub fn coords(&self, i: usize) -> (f64, f64) {
        let (t, u) = (self.spec.t(i / self.m), self.spec.u(i % self.m));
        let y = t.exp();
        (u * y, y)
    }
}

impl SampledBundle for HorocycleSample {
    fn point_count(&self) -> usize {
        self.levels * self.m
    }

    fn base_count(&self) -> usize {
        self.levels
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        let ((x1, y1), (x2, y2)) = (self.coords(i), self.coords(j));
        let arg = 1.0 + ((x1 - x2).powi(2) + (y1 - y2).powi(2)) / (2.0 * y1 * y2);
        arg.max(1.0).acosh()
    }

    fn fiber_dist(&self, i: usize, j: usize) -> f64 {
        (self.spec.u(i % self.m) - self.spec.u(j % self.m)).abs()
    }

    fn base_of(&self, i: usize) -> usize {
        i / self.m
    }

    fn base_dist(&self, a: usize, b: usize) -> f64 {
        (self.spec.t(a) - self.spec.t(b)).abs()
    }

    fn label(&self, i: usize) -> Option<String> {
        let (x, y) = self.coords(i);
        Some(format!("({x:.3},{:.3})", y.ln()))
    }
}
