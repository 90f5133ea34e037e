//! Barycenter-flow sections.
//!
//! A section through `x` picks a well-separated triple in the fiber of `x`
//! whose barycenter is nearest to `x`, pushes the triple to every other fiber
//! with the fiber transitions along canonical base geodesics, and takes
//! fiberwise barycenters. The value at the fiber of `x` is `x` itself.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{ReAnchor, Section, SectionKind, SectionLog};
use crate::bundle::{Fiber, MetricGraphBundle};
use crate::error::Result;
use crate::half::Half;
use crate::hyperbolicity::barycenter;

/// Candidate pool size for triples in large fibers.
pub const TRIPLE_POOL: usize = 48;

/// A finite stand-in for a boundary triple of a fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarTriple {
    /// Total-space ids.
    pub vertices: [u32; 3],
    /// Smallest pairwise fiber distance.
    pub separation: u32,
    pub basepoint: u32,
    /// `(y2.y3)`, `(y1.y3)`, `(y1.y2)` at the basepoint, in the fiber metric.
    pub gromov: [Half; 3],
    pub barycenter: u32,
}

/// `⌈diam / 3⌉`.
pub fn default_separation(diam: u32) -> u32 {
    diam.div_ceil(3)
}

fn separation(f: &Fiber, t: [u32; 3]) -> u32 {
    let g = &f.graph;
    g.dist(t[0], t[1]).min(g.dist(t[0], t[2])).min(g.dist(t[1], t[2]))
}

fn make_triple(f: &Fiber, local: [u32; 3], basepoint: u32) -> FarTriple {
    let g = &f.graph;
    let p = basepoint;
    let prod = |a: u32, c: u32| Half::from_twice(g.dist(p, a) as i64 + g.dist(p, c) as i64 - g.dist(a, c) as i64);
    let [a, b, c] = local;
    FarTriple {
        vertices: local.map(|v| f.vertices[v as usize]),
        separation: separation(f, local),
        basepoint: f.vertices[p as usize],
        gromov: [prod(b, c), prod(a, c), prod(a, b)],
        barycenter: f.vertices[barycenter(g, a, b, c) as usize],
    }
}

/// Triple maximizing the smallest pairwise fiber distance among triples
/// separated by at least `s` (default `⌈diam/3⌉`); ties go to the
/// lexicographically smallest ids. `None` when no such triple exists.
pub fn far_triple(b: &MetricGraphBundle, base: u32, s: Option<u32>) -> Option<FarTriple> {
    let f = b.fiber(base);
    let m = f.len();
    if m < 3 {
        return None;
    }
    let g = &f.graph;
    let s = s.unwrap_or_else(|| default_separation(g.diameter()));
    let mut values: Vec<u32> = Vec::new();
    for a in 0..m as u32 {
        let row = g.row(a);
        for c in a + 1..m as u32 {
            values.push(row.get(c));
        }
    }
    values.retain(|&d| d >= s);
    values.sort_unstable();
    values.dedup();
    let words = m.div_ceil(64);
    let find = |d: u32| -> Option<[u32; 3]> {
        let far: Vec<Vec<u64>> = (0..m as u32)
            .map(|a| {
                let row = g.row(a);
                let mut bits = vec![0u64; words];
                for c in 0..m as u32 {
                    if row.get(c) >= d {
                        bits[c as usize / 64] |= 1 << (c % 64);
                    }
                }
                bits
            })
            .collect();
        for a in 0..m {
            for bb in a + 1..m {
                if far[a][bb / 64] >> (bb % 64) & 1 == 0 {
                    continue;
                }
                let start = bb + 1;
                for wi in start / 64..words {
                    let mut w = far[a][wi] & far[bb][wi];
                    if wi == start / 64 {
                        w &= !0u64 << (start % 64);
                    }
                    if w != 0 {
                        let c = wi * 64 + w.trailing_zeros() as usize;
                        return Some([a as u32, bb as u32, c as u32]);
                    }
                }
            }
        }
        None
    };
    // Existence is monotone in the threshold: binary search for the largest.
    let (mut lo, mut hi) = (0usize, values.len());
    let mut best = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match find(values[mid]) {
            Some(t) => {
                best = Some(t);
                lo = mid + 1;
            }
            None => hi = mid,
        }
    }
    best.map(|t| make_triple(f, t, 0))
}

/// Spread-out candidate vertices (local ids): the whole fiber when small,
/// otherwise greedy farthest-point sampling started at `start`.
fn pool(f: &Fiber, start: u32, size: usize) -> Vec<u32> {
    let m = f.len();
    if m <= size {
        return (0..m as u32).collect();
    }
    let g = &f.graph;
    let mut chosen = vec![start];
    let mut gap: Vec<u32> = (0..m as u32).map(|v| g.dist(start, v)).collect();
    while chosen.len() < size {
        let (next, _) = gap.iter().enumerate().max_by_key(|&(i, &d)| (d, std::cmp::Reverse(i))).unwrap();
        let next = next as u32;
        chosen.push(next);
        let row = g.row(next);
        for (v, d) in gap.iter_mut().enumerate() {
            *d = (*d).min(row.get(v as u32));
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Among `s`-separated triples of the candidate pool, the one whose barycenter
/// is nearest to `x`; ties go to larger separation, then smaller ids.
pub fn far_triple_near(b: &MetricGraphBundle, x: u32, s: u32, pool_size: usize) -> Option<FarTriple> {
    let f = b.fiber(b.proj(x));
    let g = &f.graph;
    let lx = b.local(x);
    let cand = pool(f, lx, pool_size);
    let xrow = g.row(lx);
    let mut best: Option<((u32, std::cmp::Reverse<u32>, [u32; 3]), [u32; 3])> = None;
    for i in 0..cand.len() {
        let ri = g.row(cand[i]);
        for j in i + 1..cand.len() {
            let dij = ri.get(cand[j]);
            if dij < s {
                continue;
            }
            let rj = g.row(cand[j]);
            for &c in &cand[j + 1..] {
                let (dic, djc) = (ri.get(c), rj.get(c));
                if dic < s || djc < s {
                    continue;
                }
                let t = [cand[i], cand[j], c];
                let bc = barycenter(g, t[0], t[1], t[2]);
                let key = (xrow.get(bc), std::cmp::Reverse(dij.min(dic).min(djc)), t);
                if best.as_ref().map_or(true, |(k, _)| key < *k) {
                    best = Some((key, t));
                }
            }
        }
    }
    best.map(|(_, t)| make_triple(f, t, lx))
}

/// Parameters of barycenter-flow sections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    /// Separation for every fiber; default `⌈diam(F_b)/3⌉` per fiber.
    pub separation: Option<u32>,
    pub pool: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig { separation: None, pool: TRIPLE_POOL }
    }
}

/// Builds and caches barycenter-flow sections of one bundle.
pub struct SectionFactory<'a> {
    bundle: &'a MetricGraphBundle,
    config: FlowConfig,
    diameters: OnceLock<Vec<u32>>,
    triples: Mutex<HashMap<(u32, u32), Option<FarTriple>>>,
    sections: Mutex<HashMap<u32, Arc<Section>>>,
}

impl<'a> SectionFactory<'a> {
    pub fn new(bundle: &'a MetricGraphBundle, config: FlowConfig) -> SectionFactory<'a> {
        SectionFactory {
            bundle,
            config,
            diameters: OnceLock::new(),
            triples: Mutex::new(HashMap::new()),
            sections: Mutex::new(HashMap::new()),
        }
    }

    pub fn bundle(&self) -> &'a MetricGraphBundle {
        self.bundle
    }

    pub fn config(&self) -> FlowConfig {
        self.config
    }

    pub fn fiber_diameter(&self, base: u32) -> u32 {
        self.diameters.get_or_init(|| self.bundle.fibers().iter().map(|f| f.graph.diameter()).collect())
            [base as usize]
    }

    pub fn separation(&self, base: u32) -> u32 {
        self.config.separation.unwrap_or_else(|| default_separation(self.fiber_diameter(base)))
    }

    fn triple_near(&self, x: u32) -> Option<FarTriple> {
        let s = self.separation(self.bundle.proj(x));
        if let Some(t) = self.triples.lock().unwrap().get(&(x, s)) {
            return t.clone();
        }
        let t = far_triple_near(self.bundle, x, s, self.config.pool);
        self.triples.lock().unwrap().insert((x, s), t.clone());
        t
    }

    /// Section through `x`, built once and cached.
    pub fn through(&self, x: u32) -> Arc<Section> {
        if let Some(s) = self.sections.lock().unwrap().get(&x) {
            return s.clone();
        }
        let s = Arc::new(self.build(x));
        self.sections.lock().unwrap().insert(x, s.clone());
        s
    }

    fn build(&self, x: u32) -> Section {
        let b = self.bundle;
        let v = b.proj(x);
        let nb = b.base().vertex_count();
        let Some(triple) = self.triple_near(x) else {
            log::warn!("fiber over {v} has no separated triple; using the transit section through {x}");
            let values = (0..nb as u32).map(|w| b.transit(x, w)).collect();
            let log = SectionLog { through: Some(x), fallback: true, ..Default::default() };
            return Section::from_parts(values, SectionKind::Constant, log);
        };
        let mut values = vec![0u32; nb];
        let mut re_anchors = Vec::new();
        for w in 0..nb as u32 {
            if w == v {
                values[w as usize] = x;
                continue;
            }
            let geo = b.base().geodesic_unchecked(v, w);
            let mut cur = triple.vertices;
            for &c in &geo.vertices()[1..] {
                cur = cur.map(|y| b.step(y, c));
                let f = b.fiber(c);
                let local = cur.map(|y| b.local(y));
                let s = self.separation(c);
                if 2 * separation(f, local) < s {
                    let center = f.vertices[barycenter(&f.graph, local[0], local[1], local[2]) as usize];
                    if let Some(t) = self.triple_near(center) {
                        cur = t.vertices;
                        re_anchors.push(ReAnchor { target: w, fiber: c });
                    }
                }
            }
            let f = b.fiber(w);
            let l = cur.map(|y| b.local(y));
            values[w as usize] = f.vertices[barycenter(&f.graph, l[0], l[1], l[2]) as usize];
        }
        if !re_anchors.is_empty() {
            log::debug!("section through {x}: {} re-anchorings", re_anchors.len());
        }
        let distance = b.fdist(x, triple.barycenter);
        let log = SectionLog {
            through: Some(x),
            patched: triple.barycenter != x,
            barycenter_distance: Some(distance),
            triple: Some(triple),
            re_anchors,
            fallback: false,
        };
        Section::from_parts(values, SectionKind::BarycenterFlow, log)
    }
}

/// Barycenter-flow section through `x`.
pub fn barycenter_flow_section(b: &MetricGraphBundle, x: u32, config: FlowConfig) -> Result<Section> {
    b.total().check_vertex(x)?;
    Ok((*SectionFactory::new(b, config).through(x)).clone())
}

/// How well the barycenters of separated triples cover one fiber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberCoverage {
    pub base: u32,
    pub fiber_size: usize,
    pub fiber_diameter: u32,
    pub triples: usize,
    /// Smallest `N` with the fiber inside the `N`-neighborhood of the barycenters.
    pub covering_radius: Option<u32>,
    /// Smallest grid value at least the covering radius.
    pub grid_radius: Option<u32>,
    /// Covering radius at least a third of the fiber diameter.
    pub weak: bool,
}

pub fn barycenter_surjectivity_report(b: &MetricGraphBundle, n_grid: &[u32], config: FlowConfig) -> Vec<FiberCoverage> {
    b.fibers()
        .iter()
        .map(|f| {
            let g = &f.graph;
            let diam = g.diameter();
            let s = config.separation.unwrap_or_else(|| default_separation(diam));
            let cand = pool(f, 0, config.pool);
            let mut centers = Vec::new();
            let mut triples = 0;
            for i in 0..cand.len() {
                for j in i + 1..cand.len() {
                    for &c in &cand[j + 1..] {
                        if separation(f, [cand[i], cand[j], c]) >= s {
                            triples += 1;
                            centers.push(barycenter(g, cand[i], cand[j], c));
                        }
                    }
                }
            }
            centers.sort_unstable();
            centers.dedup();
            let covering_radius = if f.len() == 1 {
                Some(0)
            } else if centers.is_empty() {
                None
            } else {
                g.multi_source_bfs(&centers, u32::MAX).into_iter().max()
            };
            FiberCoverage {
                base: f.base,
                fiber_size: f.len(),
                fiber_diameter: diam,
                triples,
                covering_radius,
                grid_radius: covering_radius.and_then(|r| n_grid.iter().copied().filter(|&n| n >= r).min()),
                weak: covering_radius.map_or(f.len() > 1, |r| diam > 0 && 3 * r >= diam),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::generate_product_bundle;
    use crate::graph::generators::{path, tree};

    #[test]
    fn far_triple_on_a_path() {
        let b = generate_product_bundle(&path(1), &path(10)).unwrap();
        let t = far_triple(&b, 0, None).unwrap();
        assert_eq!(t.vertices, [0, 4, 8]);
        assert_eq!(t.separation, 4);
        assert_eq!(t.barycenter, 4);
        assert_eq!(t.gromov, [Half::from_int(4), Half::ZERO, Half::ZERO]);
        assert!(far_triple(&generate_product_bundle(&path(1), &path(2)).unwrap(), 0, None).is_none());
    }

    #[test]
    fn far_triple_on_a_tree() {
        let b = generate_product_bundle(&path(1), &tree(3, 2)).unwrap();
        let t = far_triple(&b, 0, None).unwrap();
        // Three leaves in different branches of the root.
        assert_eq!(t.separation, 4);
        assert_eq!(t.barycenter, 0);
        assert_eq!(t.vertices, [4, 7, 10]);
    }

    #[test]
    fn near_triple_prefers_barycenter_at_x() {
        let b = generate_product_bundle(&path(1), &path(10)).unwrap();
        let t = far_triple_near(&b, 5, 3, TRIPLE_POOL).unwrap();
        assert_eq!(t.barycenter, 5);
        let t = far_triple_near(&b, 0, 3, TRIPLE_POOL).unwrap();
        assert_eq!(t.barycenter, 3);
    }

    #[test]
    fn product_section_is_constant() {
        let b = generate_product_bundle(&path(4), &path(10)).unwrap();
        let s = barycenter_flow_section(&b, 2 * 10 + 5, FlowConfig::default()).unwrap();
        assert_eq!(s.values(), &[5, 15, 25, 35]);
        assert!(!s.log().patched);
        assert!(s.log().re_anchors.is_empty());
    }

    #[test]
    fn single_base_vertex() {
        let b = generate_product_bundle(&path(1), &path(5)).unwrap();
        let s = barycenter_flow_section(&b, 4, FlowConfig::default()).unwrap();
        assert_eq!(s.values(), &[4]);
        let tiny = generate_product_bundle(&path(3), &path(2)).unwrap();
        let s = barycenter_flow_section(&tiny, 1, FlowConfig::default()).unwrap();
        assert!(s.log().fallback);
        assert_eq!(s.values(), &[1, 3, 5]);
    }

    #[test]
    fn coverage_of_paths_and_points() {
        let b = generate_product_bundle(&path(2), &path(31)).unwrap();
        let r = barycenter_surjectivity_report(&b, &[1, 2, 4, 8, 16], FlowConfig::default());
        assert_eq!(r[0].covering_radius, Some(10));
        assert_eq!(r[0].grid_radius, Some(16));
        assert!(r[0].weak);
        let p = generate_product_bundle(&path(2), &path(1)).unwrap();
        let r = barycenter_surjectivity_report(&p, &[1], FlowConfig::default());
        assert_eq!(r[0].covering_radius, Some(0));
        assert!(!r[0].weak);
    }
}
