//! Empirical check of the discrete path-family hyperbolicity criterion.
//!
//! For a family `c(x, y)` the checker measures
//! `D1` (largest gap between successive points),
//! `D3` (largest length of `c(x, y)` over pairs with `d(x, y) <= D2`),
//! and `D4` (largest Hausdorff distance between `c(x', y')` and the matching
//! subpath of `c(x, y)`, and largest slimness of path triangles).
//! The verdict is PASS when `D1`, `D3` and `D4` stay within the configured cap.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::paths::PathFamily;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HamenstadtConfig {
    /// `D2`: pairs this close must have short paths.
    pub short_radius: u32,
    pub cap: u32,
    /// Sources whose whole `D2`-ball is checked for property (2).
    pub short_sources: usize,
    /// Random triples when the vertex set has more than `exhaustive_triples` of them.
    pub triples: usize,
    pub exhaustive_triples: usize,
    /// Subpath pairs tested per triangle side.
    pub subpath_samples: usize,
    pub seed: u64,
}

impl Default for HamenstadtConfig {
    fn default() -> Self {
        HamenstadtConfig {
            short_radius: 2,
            cap: 5,
            short_sources: 64,
            triples: 200,
            exhaustive_triples: 50_000,
            subpath_samples: 4,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Gap,
    ShortLength,
    Subpath,
    Slimness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamenstadtWitness {
    pub property: Property,
    /// The endpoints involved: a pair, a subpath pair `(x, y, x', y')`, or a triangle.
    pub points: Vec<u32>,
    pub value: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamenstadtReport {
    #[serde(rename = "D1")]
    pub d1: u32,
    #[serde(rename = "D2")]
    pub d2: u32,
    #[serde(rename = "D3")]
    pub d3: u32,
    #[serde(rename = "D4")]
    pub d4: u32,
    pub subpath: u32,
    pub slimness: u32,
    pub cap: u32,
    pub verdict: Verdict,
    /// Worst instance of each property.
    pub witnesses: Vec<HamenstadtWitness>,
    pub triples: usize,
    pub exhaustive: bool,
    pub paths: usize,
}

impl HamenstadtReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Default)]
struct Worst {
    value: u32,
    points: Vec<u32>,
}

impl Worst {
    fn offer(&mut self, value: u32, points: impl FnOnce() -> Vec<u32>) {
        if value > self.value || self.points.is_empty() {
            self.value = value;
            self.points = points();
        }
    }

    fn merge(mut self, other: Worst) -> Worst {
        if other.value > self.value || self.points.is_empty() {
            self = other;
        }
        self
    }
}

fn hausdorff(g: &Graph, a: &[u32], b: &[u32]) -> u32 {
    let to_b = g.multi_source_bfs(b, u32::MAX);
    let to_a = g.multi_source_bfs(a, u32::MAX);
    let x = a.iter().map(|&v| to_b[v as usize]).max().unwrap_or(0);
    let y = b.iter().map(|&v| to_a[v as usize]).max().unwrap_or(0);
    x.max(y)
}

/// Largest distance from a point of one side to the union of the other two.
fn slimness(g: &Graph, sides: [&[u32]; 3]) -> u32 {
    let mut worst = 0;
    for k in 0..3 {
        let others: Vec<u32> = (0..3).filter(|&o| o != k).flat_map(|o| sides[o].iter().copied()).collect();
        let d = g.multi_source_bfs(&others, u32::MAX);
        worst = worst.max(sides[k].iter().map(|&p| d[p as usize]).max().unwrap_or(0));
    }
    worst
}

fn triples(n: u32, cfg: &HamenstadtConfig) -> (Vec<[u32; 3]>, bool) {
    let count = (n as usize) * (n as usize).saturating_sub(1) * (n as usize).saturating_sub(2) / 6;
    if count <= cfg.exhaustive_triples {
        let mut out = Vec::with_capacity(count);
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    out.push([a, b, c]);
                }
            }
        }
        (out, true)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let out = (0..cfg.triples)
            .map(|_| {
                let s = sample(&mut rng, n as usize, 3).into_vec();
                [s[0] as u32, s[1] as u32, s[2] as u32]
            })
            .collect();
        (out, false)
    }
}

pub fn hamenstadt_check(pf: &dyn PathFamily, cfg: &HamenstadtConfig) -> HamenstadtReport {
    let g = pf.graph();
    let n = g.vertex_count() as u32;
    let (tris, exhaustive) = triples(n, cfg);

    // Property (2) over whole balls around sampled sources.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5151);
    let sources: Vec<u32> = if n as usize <= cfg.short_sources {
        g.vertices().collect()
    } else {
        let mut s = sample(&mut rng, n as usize, cfg.short_sources).into_vec();
        s.sort_unstable();
        s.into_iter().map(|v| v as u32).collect()
    };
    let short: Vec<(u32, u32)> = sources
        .iter()
        .flat_map(|&x| {
            let row = g.row(x);
            g.vertices().filter(move |&y| y != x && row.get(y) <= cfg.short_radius).map(move |y| (x, y))
        })
        .collect();
    let (gap_short, length) = short
        .par_iter()
        .map(|&(x, y)| {
            let p = pf.path(x, y);
            let mut gap = Worst::default();
            let mut len = Worst::default();
            gap.offer(p.max_gap(g), || vec![x, y]);
            len.offer(p.length(g), || vec![x, y]);
            (gap, len)
        })
        .reduce(|| (Worst::default(), Worst::default()), |a, b| (a.0.merge(b.0), a.1.merge(b.1)));

    // Properties (1), (3) and (4) over triangles.
    let (gap_tri, sub, slim, paths) = tris
        .par_iter()
        .enumerate()
        .map(|(i, &[x, y, z])| {
            let sides = [pf.path(x, y), pf.path(y, z), pf.path(x, z)];
            let mut gap = Worst::default();
            let mut sub = Worst::default();
            let mut slim = Worst::default();
            let mut paths = 3;
            for s in &sides {
                gap.offer(s.max_gap(g), || vec![s.x, s.y]);
            }
            slim.offer(slimness(g, [&sides[0].path, &sides[1].path, &sides[2].path]), || vec![x, y, z]);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            for s in &sides {
                let m = s.path.len();
                if m < 2 {
                    continue;
                }
                for _ in 0..cfg.subpath_samples {
                    let a = rng.gen_range(0..m);
                    let b = rng.gen_range(0..m);
                    let (a, b) = (a.min(b), a.max(b));
                    let (p, q) = (s.path[a], s.path[b]);
                    if p == q {
                        continue;
                    }
                    let c = pf.path(p, q);
                    paths += 1;
                    gap.offer(c.max_gap(g), || vec![p, q]);
                    sub.offer(hausdorff(g, &c.path, &s.path[a..=b]), || vec![s.x, s.y, p, q]);
                }
            }
            (gap, sub, slim, paths)
        })
        .reduce(
            || (Worst::default(), Worst::default(), Worst::default(), 0),
            |a, b| (a.0.merge(b.0), a.1.merge(b.1), a.2.merge(b.2), a.3 + b.3),
        );

    let gap = gap_short.merge(gap_tri);
    let d4 = sub.value.max(slim.value);
    let mut witnesses = Vec::new();
    for (property, w) in [(Property::Gap, gap), (Property::ShortLength, length), (Property::Subpath, sub), (Property::Slimness, slim)] {
        if !w.points.is_empty() {
            witnesses.push(HamenstadtWitness { property, points: w.points, value: w.value });
        }
    }
    let value = |p: Property| witnesses.iter().find(|w| w.property == p).map_or(0, |w| w.value);
    let (d1, d3) = (value(Property::Gap), value(Property::ShortLength));
    let verdict = if d1 <= cfg.cap && d3 <= cfg.cap && d4 <= cfg.cap { Verdict::Pass } else { Verdict::Fail };
    HamenstadtReport {
        d1,
        d2: cfg.short_radius,
        d3,
        d4,
        subpath: value(Property::Subpath),
        slimness: value(Property::Slimness),
        cap: cfg.cap,
        verdict,
        witnesses,
        triples: tris.len(),
        exhaustive,
        paths: short.len() + paths,
    }
}
