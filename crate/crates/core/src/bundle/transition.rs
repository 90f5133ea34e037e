//! Fiber transitions and their compositions along base geodesics.
//!
//! The transition from `F_b1` to an adjacent fiber `F_b2` sends each vertex to
//! its lowest-id neighbor in `F_b2`. Composing these along the canonical base
//! geodesic gives `f_wz : F_w -> F_z`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use super::{MetricGraphBundle, PropernessProfile};
use crate::error::{Error, Result};
use crate::graph::Path;
use crate::hyperbolicity::{QiFit, QuasiGeodesicParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberTransition {
    pub source: u32,
    pub target: u32,
    /// Source-local id -> total vertex in the target fiber.
    pub map: Vec<u32>,
    pub qi: QuasiGeodesicParams,
    /// Smallest `K >= 1` with `d/K - K <= d' <= K d + K` on the measured pairs.
    pub uniform: f64,
    pub exhaustive: bool,
}

/// Smallest `K >= 1` making `d/K - K <= e <= K d + K` hold for one pair.
pub(crate) fn uniform_bound(d: u32, e: u32) -> f64 {
    let (d, e) = (d as f64, e as f64);
    let upper = e / (d + 1.0);
    let lower = (-e + (e * e + 4.0 * d).sqrt()) / 2.0;
    upper.max(lower).max(1.0)
}

const EXHAUSTIVE_FIBER: usize = 500;
const SAMPLED_SOURCES: usize = 200;

pub fn fiber_transition(b: &MetricGraphBundle, b1: u32, b2: u32) -> Result<FiberTransition> {
    b.base().check_vertex(b1)?;
    b.base().check_vertex(b2)?;
    if !b.base().has_edge(b1, b2) {
        return Err(Error::NotAdjacent(b1, b2));
    }
    let src = b.fiber(b1);
    let dst = b.fiber(b2);
    let map: Vec<u32> = src.vertices.iter().map(|&x| b.step(x, b2)).collect();
    let m = src.len();
    let exhaustive = m <= EXHAUSTIVE_FIBER;
    let sources: Vec<usize> = if exhaustive {
        (0..m).collect()
    } else {
        let step = m / SAMPLED_SOURCES;
        (0..m).step_by(step.max(1)).collect()
    };
    let (fit, uniform) = sources
        .par_iter()
        .map(|&x| {
            let mut fit = QiFit::new();
            let mut k = 1.0f64;
            let row = src.graph.row(x as u32);
            let image_row = dst.graph.row(b.local(map[x]));
            for y in 0..m {
                if y == x {
                    continue;
                }
                let d = row.get(y as u32);
                let e = image_row.get(b.local(map[y]));
                fit.add(d, e);
                k = k.max(uniform_bound(d, e));
            }
            (fit, k)
        })
        .reduce(|| (QiFit::new(), 1.0), |a, c| (a.0.merge(&c.0), a.1.max(c.1)));
    Ok(FiberTransition { source: b1, target: b2, map, qi: fit.params(), uniform, exhaustive })
}

/// `f_wz` as a map from `F_w` (local ids) to total vertices of `F_z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposedTransition {
    pub base_path: Path,
    pub map: Vec<u32>,
}

impl MetricGraphBundle {
    /// Image of `x` under the composed transition to the fiber over `z`.
    pub fn transit(&self, x: u32, z: u32) -> u32 {
        let geo = self.base().geodesic_unchecked(self.proj(x), z);
        geo.vertices()[1..].iter().fold(x, |y, &c| self.step(y, c))
    }

    /// Lift of a base path starting at `x`, following transitions.
    pub fn transit_path(&self, x: u32, base_path: &[u32]) -> Vec<u32> {
        let mut out = Vec::with_capacity(base_path.len());
        let mut y = x;
        for (i, &c) in base_path.iter().enumerate() {
            if i > 0 {
                y = self.step(y, c);
            }
            out.push(y);
        }
        out
    }
}

pub fn transition_along_geodesic(b: &MetricGraphBundle, w: u32, z: u32) -> Result<ComposedTransition> {
    b.base().check_vertex(w)?;
    b.base().check_vertex(z)?;
    let base_path = b.base().geodesic_unchecked(w, z);
    let map = b
        .fiber(w)
        .vertices
        .iter()
        .map(|&x| base_path.vertices()[1..].iter().fold(x, |y, &c| b.step(y, c)))
        .collect();
    Ok(ComposedTransition { base_path, map })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleViolation {
    pub v: u32,
    pub w: u32,
    pub z: u32,
    pub y: u32,
    pub distance: u32,
    pub bound: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub triples: usize,
    pub checks: usize,
    pub exhaustive: bool,
    /// Largest `d_z(f_vz(y), f_wz(f_vw(y)))` seen.
    pub max_distance: u32,
    pub violations: Vec<CocycleViolation>,
}

/// Checks `d_z(f_vz(y), f_wz ∘ f_vw(y)) <= f(d(v,z) + d(w,z) + d(v,w) + 3)`
/// over all base triples when the base has at most 40 vertices, otherwise
/// over `samples` random triples; every `y` in `F_v` is tested.
pub fn check_cocycle(b: &MetricGraphBundle, f: &PropernessProfile, samples: usize, seed: u64) -> CocycleReport {
    let nb = b.base().vertex_count() as u32;
    let exhaustive = nb <= 40;
    let triples: Vec<[u32; 3]> = if exhaustive {
        let mut t = Vec::new();
        for v in 0..nb {
            for w in 0..nb {
                for z in 0..nb {
                    t.push([v, w, z]);
                }
            }
        }
        t
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).map(|_| [0; 3].map(|_| rng.gen_range(0..nb))).collect()
    };
    let mut pairs: Vec<(u32, u32)> = triples.iter().flat_map(|t| [(t[0], t[2]), (t[0], t[1]), (t[1], t[2])]).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let maps: HashMap<(u32, u32), Vec<u32>> = pairs
        .par_iter()
        .map(|&(a, c)| ((a, c), transition_along_geodesic(b, a, c).expect("valid ids").map))
        .collect();
    let base = b.base();
    let results: Vec<(usize, u32, Vec<CocycleViolation>)> = triples
        .par_iter()
        .map(|&[v, w, z]| {
            let bound = f.f(base.dist(v, z) + base.dist(w, z) + base.dist(v, w) + 3);
            let (vz, vw, wz) = (&maps[&(v, z)], &maps[&(v, w)], &maps[&(w, z)]);
            let mut worst = 0;
            let mut bad = Vec::new();
            for (i, &y) in b.fiber(v).vertices.iter().enumerate() {
                let direct = vz[i];
                let two = wz[b.local(vw[i]) as usize];
                let d = b.fdist(direct, two);
                worst = worst.max(d);
                if d > bound && bad.len() < 4 {
                    bad.push(CocycleViolation { v, w, z, y, distance: d, bound });
                }
            }
            (b.fiber(v).len(), worst, bad)
        })
        .collect();
    let mut violations = Vec::new();
    let mut checks = 0;
    let mut max_distance = 0;
    for (n, worst, bad) in results {
        checks += n;
        max_distance = max_distance.max(worst);
        for x in bad {
            if violations.len() < 16 {
                violations.push(x);
            }
        }
    }
    CocycleReport { triples: triples.len(), checks, exhaustive, max_distance, violations }
}
