//! Slim-triangle hyperbolicity, internal points, insize and thinness.
//!
//! Small graphs are handled exactly over every choice of geodesic sides. For
//! a fixed side point `p`, the worst choice of the other two sides is found
//! independently for each side with a widest-path pass over the geodesic DAG,
//! so no geodesic is ever enumerated. Larger graphs use canonical geodesics on
//! sampled triangles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::points::{interval_levels, interval_vertices, path_points, MetricPoint};
use crate::graph::{Graph, Path};
use crate::half::Half;

/// How triangles and their sides are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlimPolicy {
    /// Graphs up to this many vertices are scanned over all geodesic choices.
    pub exact_threshold: usize,
    /// Number of sampled triangles above the threshold.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SlimPolicy {
    fn default() -> Self {
        SlimPolicy { exact_threshold: 40, samples: 10_000, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlimMode {
    AllGeodesics,
    CanonicalExhaustive,
    CanonicalSampled,
}

/// Which geodesics form the sides of a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sides {
    Canonical,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Slim,
    Insize,
    Thin,
}

/// A triangle realizing one of the reported maxima.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleWitness {
    pub kind: WitnessKind,
    pub vertices: [u32; 3],
    /// Sides `[x1,x2]`, `[x2,x3]`, `[x1,x3]`.
    pub sides: [Path; 3],
    pub value: Half,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TriangleStats {
    pub slim: Half,
    pub insize: Half,
    pub thin: Half,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlimReport {
    pub delta_slim: Half,
    pub insize_max: Half,
    pub thin_max: Half,
    pub mode: SlimMode,
    pub triangles: usize,
    pub seed: u64,
    pub witnesses: Vec<TriangleWitness>,
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];

fn third(i: usize, j: usize) -> usize {
    3 - i - j
}

/// A triangle whose sides are given as point sets per half-unit level.
struct Triangle {
    x: [u32; 3],
    /// `sides[k]` joins `PAIRS[k]`, levels measured from the lower index.
    sides: [Vec<Vec<MetricPoint>>; 3],
}

impl Triangle {
    fn canonical(g: &Graph, x: [u32; 3]) -> Triangle {
        let side = |a: u32, b: u32| -> Vec<Vec<MetricPoint>> {
            path_points(&g.geodesic_unchecked(a, b).0).into_iter().map(|p| vec![p]).collect()
        };
        Triangle { x, sides: [side(x[0], x[1]), side(x[1], x[2]), side(x[0], x[2])] }
    }

    fn all(g: &Graph, x: [u32; 3]) -> Triangle {
        Triangle {
            x,
            sides: [
                interval_levels(g, x[0], x[1]),
                interval_levels(g, x[1], x[2]),
                interval_levels(g, x[0], x[2]),
            ],
        }
    }

    fn side_of(i: usize, j: usize) -> (usize, bool) {
        let k = PAIRS.iter().position(|&(a, b)| (a, b) == (i.min(j), i.max(j))).unwrap();
        (k, i < j)
    }

    /// Twice the side length between corners `i` and `j`.
    fn len2(&self, i: usize, j: usize) -> usize {
        self.sides[Self::side_of(i, j).0].len() - 1
    }

    /// Points of side `[x_i, x_j]` at half-unit distance `t` from `x_i`.
    fn at(&self, i: usize, j: usize, t: usize) -> &[MetricPoint] {
        let (k, forward) = Self::side_of(i, j);
        let lv = &self.sides[k];
        if forward {
            &lv[t]
        } else {
            &lv[lv.len() - 1 - t]
        }
    }

    /// Half-unit distance from `x_i` to the internal point on `[x_i, x_j]`.
    fn internal_level(&self, i: usize, j: usize) -> usize {
        let k = third(i, j);
        (self.len2(i, j) + self.len2(i, k) - self.len2(j, k)) / 2
    }

    fn internal_candidates(&self, k: usize) -> &[MetricPoint] {
        let (i, j) = match k {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        self.at(i, j, self.internal_level(i, j))
    }

    fn insize2(&self, g: &Graph) -> u32 {
        let mut best = 0;
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            for &p in self.internal_candidates(a) {
                for &q in self.internal_candidates(b) {
                    best = best.max(p.dist2(g, q));
                }
            }
        }
        best
    }

    fn thin2(&self, g: &Graph) -> u32 {
        let mut best = 0;
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let reach = self.internal_level(i, j);
            for t in 0..=reach {
                for &p in self.at(i, k, t) {
                    for &q in self.at(i, j, t) {
                        best = best.max(p.dist2(g, q));
                    }
                }
            }
        }
        best
    }

    /// Slimness with fixed single-geodesic sides. Returns the value and the side index.
    fn slim2_fixed(&self, g: &Graph) -> (u32, usize) {
        let flat: Vec<Vec<MetricPoint>> =
            self.sides.iter().map(|s| s.iter().flatten().copied().collect()).collect();
        let mut best = (0, 0);
        for k in 0..3 {
            for &p in &flat[k] {
                let mut m = u32::MAX;
                for (o, others) in flat.iter().enumerate() {
                    if o == k {
                        continue;
                    }
                    for &q in others {
                        m = m.min(p.dist2(g, q));
                        if m <= best.0 {
                            break;
                        }
                    }
                }
                if m > best.0 {
                    best = (m, k);
                }
            }
        }
        best
    }

    fn side_paths(&self, g: &Graph) -> [Path; 3] {
        PAIRS.map(|(i, j)| g.geodesic_unchecked(self.x[i], self.x[j]))
    }
}

/// Geodesic DAG between two vertices, used for widest-path passes.
struct Dag {
    order: Vec<u32>,
    preds: Vec<Vec<u32>>,
}

impl Dag {
    fn new(g: &Graph, x: u32, z: u32) -> Dag {
        let order = interval_vertices(g, x, z);
        let rx = g.row(x);
        let mut local = std::collections::HashMap::with_capacity(order.len());
        for (i, &v) in order.iter().enumerate() {
            local.insert(v, i as u32);
        }
        let preds = order
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .iter()
                    .filter(|&&u| rx.get(u) + 1 == rx.get(v))
                    .filter_map(|u| local.get(u).copied())
                    .collect()
            })
            .collect();
        Dag { order, preds }
    }

    /// Largest possible distance (half-units) from `p` to a geodesic in the DAG,
    /// with the maximizing geodesic when `trace` is set.
    fn widest(&self, g: &Graph, p: MetricPoint, trace: bool) -> (u32, Option<Vec<u32>>) {
        let n = self.order.len();
        let mut best = vec![0u32; n];
        let mut from = vec![u32::MAX; if trace { n } else { 0 }];
        best[0] = p.dist2(g, MetricPoint::Vertex(self.order[0]));
        for i in 1..n {
            let v = self.order[i];
            let mut m = 0;
            let mut arg = u32::MAX;
            for &j in &self.preds[i] {
                let u = self.order[j as usize];
                let through = best[j as usize].min(p.dist2(g, MetricPoint::midpoint(u, v)));
                if arg == u32::MAX || through > m {
                    m = through;
                    arg = j;
                }
            }
            best[i] = m.min(p.dist2(g, MetricPoint::Vertex(v)));
            if trace {
                from[i] = arg;
            }
        }
        let path = trace.then(|| {
            let mut out = vec![self.order[n - 1]];
            let mut i = n - 1;
            while i > 0 {
                i = from[i] as usize;
                out.push(self.order[i]);
            }
            out.reverse();
            out
        });
        (best[n - 1], path)
    }
}

/// Slimness of a triangle over all geodesic choices, with a side index and
/// the point on it realizing the value.
fn slim2_all(t: &Triangle, widest: &dyn Fn(MetricPoint, u32, u32) -> u32) -> (u32, usize, MetricPoint) {
    let mut best = (0, 0, MetricPoint::Vertex(t.x[0]));
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        let l = third(i, j);
        for &p in t.sides[k].iter().flatten() {
            let v = widest(p, t.x[i], t.x[l]).min(widest(p, t.x[j], t.x[l]));
            if v > best.0 {
                best = (v, k, p);
            }
        }
    }
    best
}

/// A geodesic from `a` to `b` through point `p` of their interval.
fn geodesic_through(g: &Graph, a: u32, b: u32, p: MetricPoint) -> Path {
    let (u, v) = match p {
        MetricPoint::Vertex(v) => (v, v),
        MetricPoint::Midpoint(x, y) => {
            if g.dist(a, x) < g.dist(a, y) {
                (x, y)
            } else {
                (y, x)
            }
        }
    };
    let mut out = g.geodesic_unchecked(a, u).0;
    let tail = g.geodesic_unchecked(v, b).0;
    out.extend(tail.into_iter().skip(usize::from(u == v)));
    Path(out)
}

/// Slimness, insize and thinness of one triangle.
pub fn triangle_stats(g: &Graph, x: [u32; 3], sides: Sides) -> TriangleStats {
    match sides {
        Sides::Canonical => {
            let t = Triangle::canonical(g, x);
            TriangleStats {
                slim: Half::from_twice(t.slim2_fixed(g).0 as i64),
                insize: Half::from_twice(t.insize2(g) as i64),
                thin: Half::from_twice(t.thin2(g) as i64),
            }
        }
        Sides::All => {
            let t = Triangle::all(g, x);
            let dags = PAIRS.map(|(i, j)| ((x[i], x[j]), Dag::new(g, x[i], x[j])));
            let widest = |p: MetricPoint, a: u32, b: u32| -> u32 {
                let dag = dags
                    .iter()
                    .find(|((u, v), _)| (*u, *v) == (a, b) || (*u, *v) == (b, a))
                    .map(|(_, d)| d)
                    .unwrap();
                dag.widest(g, p, false).0
            };
            TriangleStats {
                slim: Half::from_twice(slim2_all(&t, &widest).0 as i64),
                insize: Half::from_twice(t.insize2(g) as i64),
                thin: Half::from_twice(t.thin2(g) as i64),
            }
        }
    }
}

/// Widest-path values for every point and every vertex pair of a small graph.
struct WidestTable {
    n: usize,
    edges: Vec<(u32, u32)>,
    /// `values[pair][point]`, pair index `min * n + max`.
    values: Vec<Vec<u32>>,
}

impl WidestTable {
    fn build(g: &Graph) -> WidestTable {
        let n = g.vertex_count();
        let edges: Vec<(u32, u32)> = g.edges().collect();
        let points: Vec<MetricPoint> = g
            .vertices()
            .map(MetricPoint::Vertex)
            .chain(edges.iter().map(|&(a, b)| MetricPoint::Midpoint(a, b)))
            .collect();
        let values = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (x, z) = ((idx / n) as u32, (idx % n) as u32);
                if x > z {
                    return Vec::new();
                }
                let dag = Dag::new(g, x, z);
                points.iter().map(|&p| dag.widest(g, p, false).0).collect()
            })
            .collect();
        WidestTable { n, edges, values }
    }

    fn point_index(&self, p: MetricPoint) -> usize {
        match p {
            MetricPoint::Vertex(v) => v as usize,
            MetricPoint::Midpoint(a, b) => self.n + self.edges.binary_search(&(a, b)).expect("edge exists"),
        }
    }

    fn get(&self, p: MetricPoint, a: u32, b: u32) -> u32 {
        let (a, b) = (a.min(b) as usize, a.max(b) as usize);
        self.values[a * self.n + b][self.point_index(p)]
    }
}

fn exhaustive_triples(n: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        out.push([a, a, a]);
        for b in a + 1..n {
            out.push([a, b, a]);
            for c in b + 1..n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

#[derive(Clone, Copy)]
struct Scored {
    slim: (u32, usize),
    insize: (u32, usize),
    thin: (u32, usize),
}

fn fold_max(stats: &[TriangleStats]) -> Scored {
    let mut s = Scored { slim: (0, 0), insize: (0, 0), thin: (0, 0) };
    for (i, t) in stats.iter().enumerate() {
        for (slot, v) in [(&mut s.slim, t.slim), (&mut s.insize, t.insize), (&mut s.thin, t.thin)] {
            let v = v.twice() as u32;
            if v > slot.0 {
                *slot = (v, i);
            }
        }
    }
    s
}

/// Slim-triangle constant of `g` under the given policy, with insize and
/// thinness maxima over the same triangles.
pub fn delta_slim(g: &Graph, policy: &SlimPolicy) -> SlimReport {
    let n = g.vertex_count() as u32;
    let exhaustive_count = {
        let n = n as u64;
        n + n * n.saturating_sub(1) / 2 + n * n.saturating_sub(1) * n.saturating_sub(2) / 6
    };
    if (n as usize) <= policy.exact_threshold {
        return delta_slim_all(g, policy.seed);
    }
    let (mode, triples) = if exhaustive_count <= policy.samples as u64 {
        (SlimMode::CanonicalExhaustive, exhaustive_triples(n))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
        let t = (0..policy.samples)
            .map(|_| [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)])
            .collect();
        (SlimMode::CanonicalSampled, t)
    };
    let stats: Vec<TriangleStats> =
        triples.par_iter().map(|&x| triangle_stats(g, x, Sides::Canonical)).collect();
    let best = fold_max(&stats);
    let witness = |kind, (v, i): (u32, usize)| {
        let t = Triangle::canonical(g, triples[i]);
        TriangleWitness { kind, vertices: triples[i], sides: t.side_paths(g), value: Half::from_twice(v as i64) }
    };
    SlimReport {
        delta_slim: Half::from_twice(best.slim.0 as i64),
        insize_max: Half::from_twice(best.insize.0 as i64),
        thin_max: Half::from_twice(best.thin.0 as i64),
        mode,
        triangles: triples.len(),
        seed: policy.seed,
        witnesses: vec![
            witness(WitnessKind::Slim, best.slim),
            witness(WitnessKind::Insize, best.insize),
            witness(WitnessKind::Thin, best.thin),
        ],
    }
}

fn delta_slim_all(g: &Graph, seed: u64) -> SlimReport {
    let table = WidestTable::build(g);
    let triples = exhaustive_triples(g.vertex_count() as u32);
    let widest = |p: MetricPoint, a: u32, b: u32| table.get(p, a, b);
    let results: Vec<(TriangleStats, usize, MetricPoint)> = triples
        .par_iter()
        .map(|&x| {
            let t = Triangle::all(g, x);
            let (s, k, p) = slim2_all(&t, &widest);
            let st = TriangleStats {
                slim: Half::from_twice(s as i64),
                insize: Half::from_twice(t.insize2(g) as i64),
                thin: Half::from_twice(t.thin2(g) as i64),
            };
            (st, k, p)
        })
        .collect();
    let stats: Vec<TriangleStats> = results.iter().map(|r| r.0).collect();
    let best = fold_max(&stats);

    let (_, k, p) = results[best.slim.1];
    let x = triples[best.slim.1];
    let (i, j) = PAIRS[k];
    let l = third(i, j);
    let mut sides = Triangle::canonical(g, x).side_paths(g);
    sides[k] = geodesic_through(g, x[i], x[j], p);
    for (a, b) in [(i, l), (j, l)] {
        let (ka, forward) = Triangle::side_of(a, b);
        let (lo, hi) = if forward { (x[a], x[b]) } else { (x[b], x[a]) };
        let dag = Dag::new(g, lo, hi);
        sides[ka] = Path(dag.widest(g, p, true).1.unwrap());
    }
    let slim_w = TriangleWitness {
        kind: WitnessKind::Slim,
        vertices: x,
        sides,
        value: Half::from_twice(best.slim.0 as i64),
    };
    let plain = |kind, (v, idx): (u32, usize)| TriangleWitness {
        kind,
        vertices: triples[idx],
        sides: Triangle::canonical(g, triples[idx]).side_paths(g),
        value: Half::from_twice(v as i64),
    };
    SlimReport {
        delta_slim: Half::from_twice(best.slim.0 as i64),
        insize_max: Half::from_twice(best.insize.0 as i64),
        thin_max: Half::from_twice(best.thin.0 as i64),
        mode: SlimMode::AllGeodesics,
        triangles: triples.len(),
        seed,
        witnesses: vec![slim_w, plain(WitnessKind::Insize, best.insize), plain(WitnessKind::Thin, best.thin)],
    }
}

/// Internal points `[c1, c2, c3]` of the canonical triangle, `c_k` on the side
/// opposite `x_k`, placed exactly (midpoints when the position is half-integral).
pub fn internal_points(g: &Graph, x1: u32, x2: u32, x3: u32) -> [MetricPoint; 3] {
    let t = Triangle::canonical(g, [x1, x2, x3]);
    [0, 1, 2].map(|k| t.internal_candidates(k)[0])
}

/// A barycenter of the canonical triangle: the internal point on `[x2, x3]`,
/// snapped toward `x2` when it is a midpoint.
pub fn barycenter(g: &Graph, x1: u32, x2: u32, x3: u32) -> u32 {
    let d12 = g.dist(x1, x2);
    let d13 = g.dist(x1, x3);
    let d23 = g.dist(x2, x3);
    let twice = d12 + d23 - d13;
    let geo = g.geodesic_unchecked(x2, x3);
    geo.0[(twice / 2) as usize]
}

/// Distances from `v` to the three canonical sides `[x1,x2]`, `[x2,x3]`, `[x1,x3]`.
pub fn side_distances(g: &Graph, v: u32, x: [u32; 3]) -> [u32; 3] {
    let row = g.row(v);
    PAIRS.map(|(i, j)| {
        g.geodesic_unchecked(x[i], x[j]).0.iter().map(|&w| row.get(w)).min().unwrap()
    })
}
