//! Metric graph bundles.
//!
//! A bundle is a total graph, a base graph and a simplicial surjection
//! between them whose point preimages (fibers) are connected, such that every
//! vertex of a fiber has an edge into each fiber over an adjacent base vertex.
//! [`MetricGraphBundle`] can only be obtained through [`verify_bundle`] (or a
//! generator that calls it), so holding one means the axioms were checked.

mod extension;
pub mod free_group;
mod horocycle;
mod io;
mod net;
mod product;
mod properness;
mod transition;

use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use extension::{generate_extension_bundle, monodromy_lift, ExtensionBase, ExtensionSpec};
pub use horocycle::{generate_horocycle_bundle, HorocycleSample, HorocycleSpec};
pub use io::{read_bundle, write_bundle};
pub use net::{net_approximation, NetParams, SampledBundle, BASE_EDGE_THRESHOLD};
pub use product::generate_product_bundle;
pub use properness::{measure_properness, PropernessPolicy, PropernessProfile};
pub use transition::{
    check_cocycle, fiber_transition, transition_along_geodesic, CocycleReport, CocycleViolation,
    ComposedTransition, FiberTransition,
};

/// One fiber with its intrinsic graph.
#[derive(Debug, Clone)]
pub struct Fiber {
    pub base: u32,
    /// Fiber graph in local ids.
    pub graph: Graph,
    /// Local id -> total vertex, ascending.
    pub vertices: Vec<u32>,
}

impl Fiber {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// A validated metric graph bundle.
#[derive(Debug, Clone)]
pub struct MetricGraphBundle {
    total: Graph,
    base: Graph,
    proj: Vec<u32>,
    local: Vec<u32>,
    fibers: Arc<Vec<Fiber>>,
    boundary: Vec<bool>,
    provenance: serde_json::Value,
}

/// Checks the bundle axioms and builds the fiber index.
pub fn verify_bundle(total: Graph, base: Graph, proj: Vec<u32>) -> Result<MetricGraphBundle> {
    let n = total.vertex_count();
    let nb = base.vertex_count();
    if proj.len() != n {
        return Err(Error::ProjectionLength { got: proj.len(), expected: n });
    }
    for &b in &proj {
        base.check_vertex(b)?;
    }
    for (u, v) in total.edges() {
        let (bu, bv) = (proj[u as usize], proj[v as usize]);
        if bu != bv && !base.has_edge(bu, bv) {
            return Err(Error::NotSimplicial { u, v, bu, bv });
        }
    }
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); nb];
    for v in total.vertices() {
        members[proj[v as usize] as usize].push(v);
    }
    if let Some(b) = members.iter().position(|m| m.is_empty()) {
        return Err(Error::NotSurjective(b as u32));
    }
    let mut local = vec![0u32; n];
    let mut fibers = Vec::with_capacity(nb);
    for (b, vs) in members.into_iter().enumerate() {
        for (i, &v) in vs.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let mut edges = Vec::new();
        for &v in &vs {
            for &w in total.neighbors(v) {
                if v < w && proj[w as usize] == b as u32 {
                    edges.push((local[v as usize], local[w as usize]));
                }
            }
        }
        let graph = Graph::from_edges(vs.len(), edges).map_err(|e| match e {
            Error::Disconnected { unreached } => {
                Error::DisconnectedFiber { base: b as u32, witness: vs[unreached as usize] }
            }
            other => other,
        })?;
        fibers.push(Fiber { base: b as u32, graph, vertices: vs });
    }
    for v in total.vertices() {
        let b = proj[v as usize];
        for &b2 in base.neighbors(b) {
            if !total.neighbors(v).iter().any(|&w| proj[w as usize] == b2) {
                return Err(Error::MissingCrossEdge { vertex: v, base: b, target: b2 });
            }
        }
    }
    Ok(MetricGraphBundle {
        total,
        base,
        proj,
        local,
        fibers: Arc::new(fibers),
        boundary: vec![false; n],
        provenance: serde_json::Value::Null,
    })
}

impl MetricGraphBundle {
    pub fn total(&self) -> &Graph {
        &self.total
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn proj(&self, v: u32) -> u32 {
        self.proj[v as usize]
    }

    pub fn projection(&self) -> &[u32] {
        &self.proj
    }

    pub fn fiber(&self, b: u32) -> &Fiber {
        &self.fibers[b as usize]
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    /// Index of `v` inside its fiber.
    pub fn local(&self, v: u32) -> u32 {
        self.local[v as usize]
    }

    /// Intrinsic fiber distance; `None` when the vertices lie in different fibers.
    pub fn fiber_dist(&self, u: u32, v: u32) -> Option<u32> {
        let b = self.proj(u);
        (b == self.proj(v)).then(|| self.fiber(b).graph.dist(self.local(u), self.local(v)))
    }

    /// Fiber distance for vertices already known to share a fiber.
    pub(crate) fn fdist(&self, u: u32, v: u32) -> u32 {
        self.fiber(self.proj(u)).graph.dist(self.local(u), self.local(v))
    }

    /// Canonical geodesic inside a fiber, in total-space ids.
    pub fn fiber_geodesic(&self, u: u32, v: u32) -> Result<crate::graph::Path> {
        let b = self.proj(u);
        if self.proj(v) != b {
            return Err(Error::InvalidParameter(format!("{u} and {v} lie in different fibers")));
        }
        let f = self.fiber(b);
        let p = f.graph.geodesic_unchecked(self.local(u), self.local(v));
        Ok(crate::graph::Path(p.0.iter().map(|&x| f.vertices[x as usize]).collect()))
    }

    /// Lowest-id neighbor of `x` in the fiber over `target` (an adjacent base vertex or its own).
    pub fn step(&self, x: u32, target: u32) -> u32 {
        if self.proj(x) == target {
            return x;
        }
        *self
            .total
            .neighbors(x)
            .iter()
            .find(|&&w| self.proj(w) == target)
            .expect("cross edge exists between adjacent fibers")
    }

    /// Vertices whose edges were altered by truncating an infinite model.
    pub fn is_boundary(&self, v: u32) -> bool {
        self.boundary[v as usize]
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    pub fn with_boundary(mut self, flags: Vec<bool>) -> Result<Self> {
        if flags.len() != self.total.vertex_count() {
            return Err(Error::InvalidParameter("boundary flag count mismatch".into()));
        }
        self.boundary = flags;
        Ok(self)
    }

    /// Generator name and parameters, if any.
    pub fn provenance(&self) -> &serde_json::Value {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: serde_json::Value) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn summary(&self) -> BundleSummary {
        BundleSummary {
            total_vertices: self.total.vertex_count(),
            total_edges: self.total.edge_count(),
            base_vertices: self.base.vertex_count(),
            base_edges: self.base.edge_count(),
            max_fiber: self.fibers.iter().map(|f| f.len()).max().unwrap_or(0),
            boundary_vertices: self.boundary.iter().filter(|&&b| b).count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleSummary {
    pub total_vertices: usize,
    pub total_edges: usize,
    pub base_vertices: usize,
    pub base_edges: usize,
    pub max_fiber: usize,
    pub boundary_vertices: usize,
}
