//! Tripods of ladders and their fiberwise projections.
//!
//! Given sections `s1, s2, s3`, the section `s4` sends each base vertex to
//! the nearest point of `s3(b)` on the rung of `C(s1, s2)`. The tripod is
//! `C(s1, s2) ∪ C(s3, s4)`.

use serde::{Deserialize, Serialize};

use super::{build_ladder, lipschitz_over, Ladder, LipschitzReport};
use crate::bundle::MetricGraphBundle;
use crate::error::{Error, Result};
use crate::hyperbolicity::hausdorff_distance;
use crate::sections::{Section, SectionKind};

#[derive(Debug, Clone)]
pub struct Tripod {
    pub s3: Section,
    pub s4: Section,
    pub first: Ladder,
    pub second: Ladder,
}

pub fn build_tripod(b: &MetricGraphBundle, s1: &Section, s2: &Section, s3: &Section, l: u32) -> Result<Tripod> {
    let first = build_ladder(b, s1, s2, l)?;
    let values: Vec<u32> = b.base().vertices().map(|w| first.nearest_on_rung(b, s3.at(w))).collect();
    let s4 = Section::new(b, values, SectionKind::Projection)?;
    let second = build_ladder(b, s3, &s4, l)?;
    Ok(Tripod { s3: s3.clone(), s4, first, second })
}

impl Tripod {
    /// Vertices of both ladders over one base vertex, ascending.
    pub fn fiber_union(&self, w: u32) -> Vec<u32> {
        let mut v: Vec<u32> = self.first.rung(w).vertices().to_vec();
        v.extend(self.second.rung(w).vertices());
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn in_domain(&self, v: u32) -> bool {
        self.first.neighborhood().contains(v) || self.second.neighborhood().contains(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripodProjection {
    pub point: u32,
    /// Fiber distance from the input to its image.
    pub displacement: u32,
}

fn nearest_in_fiber(b: &MetricGraphBundle, x: u32, candidates: &[u32]) -> TripodProjection {
    let (displacement, point) = candidates.iter().map(|&c| (b.fdist(x, c), c)).min().expect("rungs are nonempty");
    TripodProjection { point, displacement }
}

/// `Π`: nearest point of the tripod in the fiber of `x`.
pub fn tripod_project(b: &MetricGraphBundle, t: &Tripod, x: u32) -> Result<TripodProjection> {
    b.total().check_vertex(x)?;
    if !t.in_domain(x) {
        return Err(Error::InvalidParameter(format!("vertex {x} lies outside both ladder neighborhoods")));
    }
    Ok(nearest_in_fiber(b, x, &t.fiber_union(b.proj(x))))
}

/// `Π₁`: nearest point on the rung of `C(s1, s2)` in the fiber of `x`.
pub fn tripod_project_to_base_ladder(b: &MetricGraphBundle, t: &Tripod, x: u32) -> Result<TripodProjection> {
    b.total().check_vertex(x)?;
    Ok(nearest_in_fiber(b, x, t.first.rung(b.proj(x)).vertices()))
}

/// Lipschitz constant of `Π` over total edges with both ends in its domain.
pub fn tripod_lipschitz(b: &MetricGraphBundle, t: &Tripod) -> LipschitzReport {
    let edges = b.total().edges().filter(|&(u, v)| t.in_domain(u) && t.in_domain(v));
    lipschitz_over(b, edges, |v| tripod_project(b, t, v).expect("edge inside domain").point)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberHausdorff {
    pub distance: u32,
    pub base: u32,
}

/// Largest fiberwise Hausdorff distance between the fiber geodesic triangle
/// on `s1(b), s2(b), s3(b)` and the tripod.
pub fn tripod_hausdorff(b: &MetricGraphBundle, t: &Tripod) -> FiberHausdorff {
    let (s1, s2, s3) = (t.first.s1(), t.first.s2(), &t.s3);
    let mut worst = FiberHausdorff { distance: 0, base: 0 };
    for w in b.base().vertices() {
        let fiber = b.fiber(w);
        let local = |v: &[u32]| -> Vec<u32> { v.iter().map(|&x| b.local(x)).collect() };
        let mut triangle = Vec::new();
        for (p, q) in [(s1.at(w), s2.at(w)), (s2.at(w), s3.at(w)), (s1.at(w), s3.at(w))] {
            triangle.extend(local(b.fiber_geodesic(p, q).expect("same fiber").vertices()));
        }
        triangle.sort_unstable();
        triangle.dedup();
        let d = hausdorff_distance(&fiber.graph, &triangle, &local(&t.fiber_union(w))).expect("nonempty sets");
        if d > worst.distance {
            worst = FiberHausdorff { distance: d, base: w };
        }
    }
    worst
}
