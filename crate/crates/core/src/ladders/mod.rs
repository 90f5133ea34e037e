//! Ladders between two sections and the constructions built on them.
//!
//! The ladder `C(s1, s2)` is the union over base vertices of the canonical
//! fiber geodesics (rungs) from `s1(b)` to `s2(b)`. `C_L` is its
//! `L`-neighborhood in the total graph, kept as an induced subgraph.

mod decompose;
mod hamenstadt;
mod paths;
mod tripod;

use serde::{Deserialize, Serialize};

use crate::bundle::MetricGraphBundle;
use crate::error::{Error, Result};
use crate::graph::{Induced, Path};
use crate::hyperbolicity::coboundedness;
use crate::sections::Section;

pub use decompose::{decompose_ladder, default_threshold, DecompositionRecord, Monotonicity};
pub use hamenstadt::{hamenstadt_check, HamenstadtConfig, HamenstadtReport, HamenstadtWitness, Property, Verdict};
pub use paths::{
    CanonicalGeodesics, DiscretePath, GlobalPaths, PathFamily, PathKind, Segments, SmallGirthPaths,
};
pub use tripod::{
    build_tripod, tripod_hausdorff, tripod_lipschitz, tripod_project, tripod_project_to_base_ladder, FiberHausdorff, Tripod,
    TripodProjection,
};

#[derive(Debug, Clone)]
pub struct Ladder {
    s1: Section,
    s2: Section,
    rungs: Vec<Path>,
    radius: u32,
    requested_radius: u32,
    vertices: Vec<u32>,
    neighborhood: Induced,
}

/// Builds `C(s1, s2)` and its `L`-neighborhood, raising `L` until the neighborhood is connected.
pub fn build_ladder(b: &MetricGraphBundle, s1: &Section, s2: &Section, l: u32) -> Result<Ladder> {
    let nb = b.base().vertex_count();
    if s1.values().len() != nb || s2.values().len() != nb {
        return Err(Error::BadSection(nb as u32));
    }
    let rungs: Vec<Path> = b
        .base()
        .vertices()
        .map(|w| b.fiber_geodesic(s1.at(w), s2.at(w)))
        .collect::<Result<_>>()?;
    let mut vertices: Vec<u32> = rungs.iter().flat_map(|r| r.vertices().iter().copied()).collect();
    vertices.sort_unstable();
    vertices.dedup();
    let total = b.total();
    let limit = total.vertex_count() as u32;
    let mut radius = l;
    let neighborhood = loop {
        let set = total.neighborhood(&vertices, radius);
        match total.induced(&set) {
            Ok(mut ind) => {
                ind.graph = ind.graph.with_matrix_threshold(0);
                break ind;
            }
            Err(Error::Disconnected { .. }) if radius < limit => radius += 1,
            Err(Error::Disconnected { .. }) => return Err(Error::DisconnectedLadder { radius }),
            Err(e) => return Err(e),
        }
    };
    if radius != l {
        log::info!("ladder neighborhood radius raised from {l} to {radius} for connectivity");
    }
    Ok(Ladder { s1: s1.clone(), s2: s2.clone(), rungs, radius, requested_radius: l, vertices, neighborhood })
}

impl Ladder {
    pub fn s1(&self) -> &Section {
        &self.s1
    }

    pub fn s2(&self) -> &Section {
        &self.s2
    }

    /// Rung over `w`, from `s1(w)` to `s2(w)`.
    pub fn rung(&self, w: u32) -> &Path {
        &self.rungs[w as usize]
    }

    pub fn rungs(&self) -> &[Path] {
        &self.rungs
    }

    pub fn rung_lengths(&self) -> Vec<u32> {
        self.rungs.iter().map(|r| r.len() as u32).collect()
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn requested_radius(&self) -> u32 {
        self.requested_radius
    }

    /// Ladder vertices, ascending.
    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn contains(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// `C_L` as an induced subgraph.
    pub fn neighborhood(&self) -> &Induced {
        &self.neighborhood
    }

    pub fn girth(&self) -> u32 {
        self.rungs.iter().map(|r| r.len() as u32).min().unwrap_or(0)
    }

    /// Index of `v` along the rung of its fiber, if it lies on it.
    pub fn position(&self, b: &MetricGraphBundle, v: u32) -> Option<usize> {
        self.rungs[b.proj(v) as usize].vertices().iter().position(|&x| x == v)
    }

    /// Nearest rung point in the fiber metric, lowest id among ties.
    pub fn nearest_on_rung(&self, b: &MetricGraphBundle, v: u32) -> u32 {
        let f = b.fiber(b.proj(v));
        let row = f.graph.row(b.local(v));
        *self.rungs[b.proj(v) as usize]
            .vertices()
            .iter()
            .min_by_key(|&&x| (row.get(b.local(x)), x))
            .expect("rungs are nonempty")
    }

    pub fn summary(&self) -> LadderSummary {
        LadderSummary {
            radius: self.radius,
            requested_radius: self.requested_radius,
            girth: self.girth(),
            rung_lengths: self.rung_lengths(),
            ladder_vertices: self.vertices.len(),
            neighborhood_vertices: self.neighborhood.global.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderSummary {
    pub radius: u32,
    pub requested_radius: u32,
    pub girth: u32,
    pub rung_lengths: Vec<u32>,
    pub ladder_vertices: usize,
    pub neighborhood_vertices: usize,
}

pub fn girth(l: &Ladder) -> u32 {
    l.girth()
}

/// Mitra retraction: fiberwise nearest-point projection onto the rung.
pub fn retraction(b: &MetricGraphBundle, l: &Ladder, x: u32) -> Result<u32> {
    b.total().check_vertex(x)?;
    Ok(l.nearest_on_rung(b, x))
}

/// Largest total distance between the images of adjacent vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub constant: u32,
    pub witness: Option<(u32, u32)>,
    pub edges: usize,
}

pub fn retraction_lipschitz(b: &MetricGraphBundle, l: &Ladder) -> LipschitzReport {
    let image: Vec<u32> = b.total().vertices().map(|v| l.nearest_on_rung(b, v)).collect();
    lipschitz_over(b, b.total().edges(), |v| image[v as usize])
}

pub(crate) fn lipschitz_over(
    b: &MetricGraphBundle,
    edges: impl Iterator<Item = (u32, u32)>,
    map: impl Fn(u32) -> u32,
) -> LipschitzReport {
    let mut report = LipschitzReport { constant: 0, witness: None, edges: 0 };
    for (u, v) in edges {
        report.edges += 1;
        let d = b.total().dist(map(u), map(v));
        if report.witness.is_none() || d > report.constant {
            report.constant = d;
            report.witness = Some((u, v));
        }
    }
    report
}

/// Coboundedness of the two section images measured inside `C_L`.
pub fn ladder_coboundedness(l: &Ladder) -> u32 {
    let ind = l.neighborhood();
    let local = |s: &Section| -> Vec<u32> {
        let mut v: Vec<u32> = s.values().iter().map(|&x| ind.local(x).expect("sections lie in C_L")).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    coboundedness(&ind.graph, &local(&l.s1), &local(&l.s2)).expect("sections are nonempty")
}
