//! Four-point hyperbolicity.
//!
//! For a quadruple with pair sums `S1 ≥ S2 ≥ S3`, the value is `(S1 - S2) / 2`.
//! The exact scan only visits quadruples made of two far-apart pairs (a pair
//! `(a, b)` is far-apart when no neighbor of `a` is farther from `b` and vice
//! versa), processed in decreasing distance order. A quadruple whose largest
//! sum pairs `(a, b)` with `(c, d)` has value at most `min(d(a,b), d(c,d)) / 2`,
//! so the scan stops once the current pair distance cannot beat the best.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::half::Half;

/// Vertex count above which [`delta_four_point`] refuses to run.
pub const FOUR_POINT_CAP: usize = 5_000;

/// Twice the four-point value of a quadruple.
#[inline]
pub fn quadruple2(g: &Graph, a: u32, b: u32, c: u32, d: u32) -> u32 {
    let s1 = g.dist(a, b) + g.dist(c, d);
    let s2 = g.dist(a, c) + g.dist(b, d);
    let s3 = g.dist(a, d) + g.dist(b, c);
    let mut s = [s1, s2, s3];
    s.sort_unstable();
    s[2] - s[1]
}

fn far_apart_pairs(g: &Graph) -> Vec<(u32, u32, u32)> {
    let n = g.vertex_count() as u32;
    let mut pairs: Vec<(u32, u32, u32)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let ra = g.row(a);
            let mut out = Vec::new();
            for b in a + 1..n {
                let d = ra.get(b);
                if g.neighbors(b).iter().any(|&w| ra.get(w) > d) {
                    continue;
                }
                let rb = g.row(b);
                if g.neighbors(a).iter().any(|&w| rb.get(w) > d) {
                    continue;
                }
                out.push((d, a, b));
            }
            out
        })
        .collect();
    pairs.sort_unstable_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    pairs
}

/// Exact four-point constant.
pub fn delta_four_point(g: &Graph) -> Result<Half> {
    if g.vertex_count() > FOUR_POINT_CAP {
        return Err(Error::TooLarge { size: g.vertex_count(), cap: FOUR_POINT_CAP });
    }
    let pairs = far_apart_pairs(g);
    let mut best = 0u32;
    for i in 0..pairs.len() {
        let (dab, a, b) = pairs[i];
        if dab <= best {
            break;
        }
        let local = pairs[..i]
            .par_iter()
            .with_min_len(256)
            .map(|&(_, c, d)| quadruple2(g, a, b, c, d))
            .max()
            .unwrap_or(0);
        best = best.max(local);
    }
    Ok(Half::from_twice(best as i64))
}

/// Four-point constant over uniformly sampled quadruples (a lower bound).
pub fn delta_four_point_sampled(g: &Graph, samples: usize, seed: u64) -> Half {
    let n = g.vertex_count() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quads: Vec<[u32; 4]> = (0..samples)
        .map(|_| [0; 4].map(|_| rng.gen_range(0..n)))
        .collect();
    let best = quads
        .par_iter()
        .map(|q| quadruple2(g, q[0], q[1], q[2], q[3]))
        .max()
        .unwrap_or(0);
    Half::from_twice(best as i64)
}
