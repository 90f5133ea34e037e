//! Measured properness function of the fiber inclusions.
//!
//! `f(N)` is the largest fiber distance between two vertices of one fiber
//! whose total-space distance is at most `N`. On scanned fibers the
//! implication `d(x,y) <= N => d_b(x,y) <= f(N)` therefore holds by
//! construction, and `f` is monotone. Beyond the largest total distance seen
//! the table is constant.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::MetricGraphBundle;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropernessPolicy {
    /// Fibers up to this size are scanned over all pairs.
    pub exhaustive_max: usize,
    /// Source vertices per larger fiber (all pairs from each source).
    pub sources: usize,
    pub seed: u64,
}

impl Default for PropernessPolicy {
    fn default() -> Self {
        PropernessPolicy { exhaustive_max: 500, sources: 200, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropernessProfile {
    /// `table[N] = f(N)` for `N` up to the largest observed total distance.
    pub table: Vec<u32>,
    /// True when every fiber was scanned over all pairs.
    pub exact: bool,
    pub sampled_fibers: usize,
}

impl PropernessProfile {
    pub fn cap(&self) -> u32 {
        self.table.len() as u32 - 1
    }

    pub fn f(&self, n: u32) -> u32 {
        self.table[n.min(self.cap()) as usize]
    }

    /// `f` at a real argument; distances are integers so this is `f(floor(x))`.
    pub fn f_real(&self, x: f64) -> u32 {
        self.f(x.max(0.0).floor() as u32)
    }

    /// `K = f(4)`.
    pub fn k(&self) -> u32 {
        self.f(4)
    }

    /// `g(C) = K + 2 f(C + 2)`.
    pub fn g(&self, c: f64) -> f64 {
        self.k() as f64 + 2.0 * self.f_real(c + 2.0) as f64
    }

    /// `mu_k(N) = g(2k)^N`.
    pub fn mu(&self, k: f64, n: u32) -> f64 {
        self.g(2.0 * k).powi(n as i32)
    }
}

pub fn measure_properness(b: &MetricGraphBundle, policy: &PropernessPolicy) -> PropernessProfile {
    let per_fiber: Vec<(Vec<u32>, bool)> = b
        .fibers()
        .par_iter()
        .map(|fiber| {
            let m = fiber.len();
            let exhaustive = m <= policy.exhaustive_max;
            let sources: Vec<usize> = if exhaustive {
                (0..m).collect()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(policy.seed ^ (fiber.base as u64).wrapping_mul(0x9E37_79B9));
                let mut s = sample(&mut rng, m, policy.sources.min(m)).into_vec();
                s.sort_unstable();
                s
            };
            let mut raw: Vec<u32> = Vec::new();
            for x in sources {
                let total_row = b.total().row(fiber.vertices[x]);
                let fiber_row = fiber.graph.row(x as u32);
                for y in 0..m {
                    let n = total_row.get(fiber.vertices[y]) as usize;
                    if raw.len() <= n {
                        raw.resize(n + 1, 0);
                    }
                    raw[n] = raw[n].max(fiber_row.get(y as u32));
                }
            }
            (raw, exhaustive)
        })
        .collect();
    let len = per_fiber.iter().map(|r| r.0.len()).max().unwrap_or(1).max(1);
    let mut table = vec![0u32; len];
    for (raw, _) in &per_fiber {
        for (n, &v) in raw.iter().enumerate() {
            table[n] = table[n].max(v);
        }
    }
    for n in 1..len {
        table[n] = table[n].max(table[n - 1]);
    }
    let sampled_fibers = per_fiber.iter().filter(|r| !r.1).count();
    PropernessProfile { table, exact: sampled_fibers == 0, sampled_fibers }
}
