use serde_json::json;

use super::{verify_bundle, MetricGraphBundle};
use crate::error::Result;
use crate::graph::Graph;

/// `base × fiber` with identity transitions; vertex `(b, f)` has id `b * |F| + f`.
pub fn generate_product_bundle(base: &Graph, fiber: &Graph) -> Result<MetricGraphBundle> {
    let nf = fiber.vertex_count() as u32;
    let nb = base.vertex_count() as u32;
    let id = |b: u32, f: u32| b * nf + f;
    let mut edges = Vec::new();
    for b in 0..nb {
        edges.extend(fiber.edges().map(|(x, y)| (id(b, x), id(b, y))));
    }
    for (a, b) in base.edges() {
        edges.extend((0..nf).map(|f| (id(a, f), id(b, f))));
    }
    let labels = (0..nb).flat_map(|b| (0..nf).map(move |f| format!("({b},{f})"))).collect();
    let total = Graph::from_edges((nb * nf) as usize, edges)?.with_labels(labels)?;
    let proj = (0..nb * nf).map(|v| v / nf).collect();
    Ok(verify_bundle(total, base.clone(), proj)?.with_provenance(json!({
        "generator": "product",
        "base_vertices": nb,
        "fiber_vertices": nf,
    })))
}
