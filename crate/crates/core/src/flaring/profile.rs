//! Bounded flaring: fiber distances between lifts change by at most
//! `μ_k(N) = g(2k)^N` over base distance `N`, with `g(C) = K + 2f(C + 2)`.

use serde::{Deserialize, Serialize};

use super::{LiftPair, BUCKETS};
use crate::bundle::PropernessProfile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedFlaringProfile {
    pub bucket: (u32, u32),
    /// `k` with `2k` the largest hop of the bucket.
    pub k: f64,
    /// `(C, g(C))` for `C = 0..=2k`.
    pub g_table: Vec<(u32, f64)>,
    /// `mu[N] = g(2k)^N`.
    pub mu_table: Vec<f64>,
    /// Largest `d_{b1} / max(d_{b2}, 1)` over lift indices at base distance `N`.
    pub empirical_mu: Vec<f64>,
    pub pairs: usize,
    /// `(pair index, N, ratio)` where the measured ratio exceeds the table.
    pub violations: Vec<(usize, usize, f64)>,
}

impl BoundedFlaringProfile {
    pub fn dominated(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn bounded_flaring_profile(f: &PropernessProfile, samples: &[LiftPair]) -> Vec<BoundedFlaringProfile> {
    let mut out = Vec::new();
    for &(lo, hi) in &BUCKETS {
        let members: Vec<(usize, &LiftPair)> =
            samples.iter().enumerate().filter(|(_, p)| p.hop.max(1) >= lo && p.hop <= hi).collect();
        if members.is_empty() {
            continue;
        }
        let k = hi as f64 / 2.0;
        let g_table = (0..=hi).map(|c| (c, f.g(c as f64))).collect();
        let len = members.iter().map(|(_, p)| p.distances.len()).max().unwrap();
        let mu_table: Vec<f64> = (0..len).map(|n| f.mu(k, n as u32)).collect();
        let mut empirical_mu = vec![0.0f64; len];
        let mut violations = Vec::new();
        for &(idx, p) in &members {
            let d = &p.distances;
            for i in 0..d.len() {
                for j in 0..d.len() {
                    let n = i.abs_diff(j);
                    let ratio = d[i] as f64 / d[j].max(1) as f64;
                    empirical_mu[n] = empirical_mu[n].max(ratio);
                    if ratio > mu_table[n] * (1.0 + 1e-12) && violations.len() < 16 {
                        violations.push((idx, n, ratio));
                    }
                }
            }
        }
        out.push(BoundedFlaringProfile {
            bucket: (lo, hi),
            k,
            g_table,
            mu_table,
            empirical_mu,
            pairs: members.len(),
            violations,
        });
    }
    out
}
