//! Nearest-point projections, quasiconvexity, coboundedness and Hausdorff distance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A nearest point of a subset, lowest id among ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionWitness {
    pub source: u32,
    pub point: u32,
    pub distance: u32,
}

pub fn nearest_point_projection(g: &Graph, x: u32, set: &[u32]) -> Result<ProjectionWitness> {
    g.check_vertex(x)?;
    if set.is_empty() {
        return Err(Error::EmptySet("nearest_point_projection"));
    }
    let row = g.row(x);
    let mut best: Option<(u32, u32)> = None;
    for &a in set {
        g.check_vertex(a)?;
        let key = (row.get(a), a);
        if best.map_or(true, |b| key < b) {
            best = Some(key);
        }
    }
    let (distance, point) = best.unwrap();
    Ok(ProjectionWitness { source: x, point, distance })
}

/// Pairs of a set to test: all pairs up to `max_pairs`, otherwise a seeded sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSample {
    pub max_pairs: usize,
    pub seed: u64,
}

impl Default for PairSample {
    fn default() -> Self {
        PairSample { max_pairs: 20_000, seed: 0 }
    }
}

impl PairSample {
    pub(crate) fn pairs(&self, set: &[u32]) -> Vec<(u32, u32)> {
        let m = set.len();
        if m * m.saturating_sub(1) / 2 <= self.max_pairs {
            let mut out = Vec::new();
            for i in 0..m {
                for j in i + 1..m {
                    out.push((set[i], set[j]));
                }
            }
            out
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            (0..self.max_pairs)
                .map(|_| (set[rng.gen_range(0..m)], set[rng.gen_range(0..m)]))
                .collect()
        }
    }
}

/// Smallest `K` with every (sampled) canonical geodesic between points of
/// `set` inside the `K`-neighborhood of `set`.
pub fn quasiconvexity_constant(g: &Graph, set: &[u32], sample: &PairSample) -> Result<u32> {
    if set.is_empty() {
        return Err(Error::EmptySet("quasiconvexity_constant"));
    }
    for &a in set {
        g.check_vertex(a)?;
    }
    let to_set = g.multi_source_bfs(set, u32::MAX);
    let mut k = 0;
    for (a, b) in sample.pairs(set) {
        for &v in g.geodesic_unchecked(a, b).vertices() {
            k = k.max(to_set[v as usize]);
        }
    }
    Ok(k)
}

fn set_diameter(g: &Graph, set: &[u32]) -> u32 {
    let mut d = 0;
    for (i, &a) in set.iter().enumerate() {
        let row = g.row(a);
        for &b in &set[i + 1..] {
            d = d.max(row.get(b));
        }
    }
    d
}

/// Projection of every member of `from` onto `onto`, deduplicated and sorted.
pub fn project_set(g: &Graph, from: &[u32], onto: &[u32]) -> Result<Vec<u32>> {
    let mut image = from
        .iter()
        .map(|&x| nearest_point_projection(g, x, onto).map(|w| w.point))
        .collect::<Result<Vec<_>>>()?;
    image.sort_unstable();
    image.dedup();
    Ok(image)
}

/// Larger of the diameters of the projections of `u` onto `v` and of `v` onto `u`.
pub fn coboundedness(g: &Graph, u: &[u32], v: &[u32]) -> Result<u32> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::EmptySet("coboundedness"));
    }
    let a = set_diameter(g, &project_set(g, u, v)?);
    let b = set_diameter(g, &project_set(g, v, u)?);
    Ok(a.max(b))
}

pub fn hausdorff_distance(g: &Graph, a: &[u32], b: &[u32]) -> Result<u32> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet("hausdorff_distance"));
    }
    for &v in a.iter().chain(b) {
        g.check_vertex(v)?;
    }
    let to_b = g.multi_source_bfs(b, u32::MAX);
    let to_a = g.multi_source_bfs(a, u32::MAX);
    let x = a.iter().map(|&v| to_b[v as usize]).max().unwrap();
    let y = b.iter().map(|&v| to_a[v as usize]).max().unwrap();
    Ok(x.max(y))
}

/// Largest distance between the two-step projection `x → U → V` and the
/// direct projection `x → V`, over the given sources. `V` should lie in `U`.
pub fn two_step_projection_defect(g: &Graph, sources: &[u32], u: &[u32], v: &[u32]) -> Result<u32> {
    let mut worst = 0;
    for &x in sources {
        let via = nearest_point_projection(g, x, u)?.point;
        let two = nearest_point_projection(g, via, v)?.point;
        let direct = nearest_point_projection(g, x, v)?.point;
        worst = worst.max(g.dist(two, direct));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{cycle, path, random_connected};

    #[test]
    fn projections() {
        let p5 = path(5);
        assert_eq!(nearest_point_projection(&p5, 0, &[4, 3]).unwrap().point, 3);
        let w = nearest_point_projection(&p5, 2, &[2]).unwrap();
        assert_eq!((w.point, w.distance), (2, 0));
        assert!(nearest_point_projection(&p5, 0, &[]).is_err());
    }

    #[test]
    fn projection_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_connected(60, 30, &mut rng);
        let set: Vec<u32> = (0..10).map(|i| i * 5 + 3).collect();
        for x in g.vertices() {
            let w = nearest_point_projection(&g, x, &set).unwrap();
            let best = set.iter().map(|&a| g.dist(x, a)).min().unwrap();
            assert_eq!(w.distance, best);
            assert!(set.iter().all(|&a| g.dist(x, a) > best || a >= w.point));
        }
    }

    #[test]
    fn quasiconvexity_values() {
        let c8 = cycle(8);
        let all: Vec<u32> = c8.vertices().collect();
        let s = PairSample::default();
        assert_eq!(quasiconvexity_constant(&c8, &all, &s).unwrap(), 0);
        assert_eq!(quasiconvexity_constant(&c8, &[0, 4], &s).unwrap(), 2);
    }

    #[test]
    fn cobounded_and_hausdorff() {
        let c8 = cycle(8);
        assert_eq!(coboundedness(&c8, &[0], &[4]).unwrap(), 0);
        assert_eq!(coboundedness(&c8, &[0, 1, 2], &[0, 1, 2]).unwrap(), 2);
        assert_eq!(hausdorff_distance(&c8, &[0], &[4]).unwrap(), 4);
        assert_eq!(hausdorff_distance(&c8, &[1, 2], &[1, 2]).unwrap(), 0);
        let geo = c8.geodesic(0, 2).unwrap();
        let detour = [0, 7, 6, 5, 4, 3, 2];
        assert_eq!(hausdorff_distance(&c8, geo.vertices(), &detour).unwrap(), 3);
    }
}
