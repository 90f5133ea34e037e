//! Empirical flaring of lifts of base geodesics.
//!
//! A pair of lifts of a base geodesic `γ: [-n, n] -> B` flares with factor
//! `λ` when `λ · d(0) <= max(d(-n), d(n))`, where `d(t)` is the fiber
//! distance between the lifts over `γ(t)`. [`flare_test`] samples lift pairs,
//! groups them by hop size, and finds the best threshold `M` and factor `λ`
//! that hold for every sampled pair with `d(0) >= M`.

mod divergence;
mod ladder;
mod necessity;
mod profile;
mod sample;

use serde::{Deserialize, Serialize};

use crate::bundle::MetricGraphBundle;
use crate::error::{Error, Result};
use crate::ladders::Verdict;
use crate::sections::{Section, SectionFactory};

pub use divergence::{divergence_test, DivergenceFit, DivergenceReport};
pub use ladder::{default_window, ladder_flare_check, LadderFlare, LadderFlareConfig, LadderType, SubladderFlare};
pub use necessity::{necessity_report, scale_consistency, NecessityPolicy, NecessityReport, ScaleConsistency};
pub use profile::{bounded_flaring_profile, BoundedFlaringProfile};
pub use sample::sample_lift_pairs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiftSource {
    /// Both lifts follow fiber transitions outward from the central fiber.
    Transit,
    /// Both lifts are restrictions of barycenter-flow sections.
    Section,
    User,
}

/// Two lifts of one base path, with their fiber distances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftPair {
    pub gamma: Vec<u32>,
    /// Index of `γ(0)` in `gamma`.
    pub center: usize,
    pub lift1: Vec<u32>,
    pub lift2: Vec<u32>,
    pub distances: Vec<u32>,
    /// Largest total distance between consecutive points of either lift.
    pub hop: u32,
    pub source: LiftSource,
}

impl LiftPair {
    pub fn new(
        b: &MetricGraphBundle,
        gamma: Vec<u32>,
        center: usize,
        lift1: Vec<u32>,
        lift2: Vec<u32>,
        source: LiftSource,
    ) -> Result<LiftPair> {
        if lift1.len() != gamma.len() || lift2.len() != gamma.len() || center >= gamma.len() {
            return Err(Error::InvalidParameter("lift lengths do not match the base path".into()));
        }
        for (i, &w) in gamma.iter().enumerate() {
            if b.proj(lift1[i]) != w || b.proj(lift2[i]) != w {
                return Err(Error::InvalidParameter(format!("lift does not project to the base path at index {i}")));
            }
        }
        let distances = (0..gamma.len()).map(|i| b.fdist(lift1[i], lift2[i])).collect();
        let hop = max_hop(b, &lift1).max(max_hop(b, &lift2));
        Ok(LiftPair { gamma, center, lift1, lift2, distances, hop, source })
    }

    /// Fiber distance at signed offset `t` from the center.
    pub fn d(&self, t: isize) -> u32 {
        self.distances[(self.center as isize + t) as usize]
    }

    pub fn touches_boundary(&self, b: &MetricGraphBundle) -> bool {
        self.lift1.iter().chain(&self.lift2).any(|&v| b.is_boundary(v))
    }

    /// `max(d(-n), d(n)) / d(0)` for a pair centered in a window of radius `n`.
    pub fn ratio(&self) -> f64 {
        let ends = self.distances[0].max(*self.distances.last().unwrap());
        ends as f64 / self.distances[self.center] as f64
    }
}

fn max_hop(b: &MetricGraphBundle, lift: &[u32]) -> u32 {
    lift.windows(2).map(|w| b.total().dist(w[0], w[1])).max().unwrap_or(0)
}

/// Values of a section along a base path.
pub fn qi_lift(gamma: &[u32], s: &Section) -> Vec<u32> {
    gamma.iter().map(|&w| s.at(w)).collect()
}

/// Sum of total distances between successive points.
pub fn lift_length(b: &MetricGraphBundle, lift: &[u32]) -> u32 {
    lift.windows(2).map(|w| b.total().dist(w[0], w[1])).sum()
}

/// `l(lift) <= 2k · l(γ)` for a lift in a `k`-qi section.
pub fn lift_length_within_bound(b: &MetricGraphBundle, lift: &[u32], k: f64) -> bool {
    lift_length(b, lift) as f64 <= 2.0 * k * (lift.len().saturating_sub(1)) as f64
}

/// Hop ranges of the buckets: lifts are grouped by their largest hop.
pub const BUCKETS: [(u32, u32); 3] = [(1, 2), (3, 4), (5, 8)];

pub fn bucket_of(hop: u32) -> Option<usize> {
    BUCKETS.iter().position(|&(lo, hi)| hop.max(1) >= lo && hop <= hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftPolicy {
    pub transit: bool,
    pub sections: bool,
}

impl Default for LiftPolicy {
    fn default() -> Self {
        LiftPolicy { transit: true, sections: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlareConfig {
    /// Window radius `n`, in base edges.
    pub window: usize,
    pub geodesics: usize,
    pub pairs: usize,
    pub lambda_grid: Vec<f64>,
    /// Number of quantiles of the central distances used as thresholds `M`.
    pub quantiles: usize,
    /// Thresholds with fewer eligible pairs cannot pass.
    pub min_support: usize,
    pub policy: LiftPolicy,
    pub seed: u64,
}

impl Default for FlareConfig {
    fn default() -> Self {
        FlareConfig {
            window: 1,
            geodesics: 200,
            pairs: 50,
            lambda_grid: vec![1.05, 1.1, 1.25, 1.5, 2.0, std::f64::consts::E],
            quantiles: 10,
            min_support: 3,
            policy: LiftPolicy::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlareWitness {
    pub gamma: Vec<u32>,
    /// The two lifts at the central fiber.
    pub pair: (u32, u32),
    pub distances: Vec<u32>,
    pub ratio: f64,
}

impl FlareWitness {
    fn of(lp: &LiftPair) -> FlareWitness {
        FlareWitness {
            gamma: lp.gamma.clone(),
            pair: (lp.lift1[lp.center], lp.lift2[lp.center]),
            distances: lp.distances.clone(),
            ratio: lp.ratio(),
        }
    }
}

/// Outcome at one threshold `M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub m: u32,
    pub pairs: usize,
    pub min_ratio: f64,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlaringEstimate {
    pub bucket: (u32, u32),
    #[serde(rename = "M")]
    pub m: Option<u32>,
    pub lambda: Option<f64>,
    pub n: usize,
    pub verdict: Verdict,
    pub samples: usize,
    /// Smallest ratio among pairs at the chosen threshold (or at the lowest one on FAIL).
    pub ratio: f64,
    pub rows: Vec<ThresholdRow>,
    pub witnesses: Vec<FlareWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlaringReport {
    pub window: usize,
    pub geodesics: usize,
    pub samples: usize,
    /// Samples dropped because a lift touched a truncation boundary.
    pub excluded: usize,
    /// Samples whose hop exceeded every bucket.
    pub unbucketed: usize,
    pub policy: LiftPolicy,
    pub buckets: Vec<FlaringEstimate>,
    /// PASS when every nonempty bucket passes.
    pub verdict: Verdict,
    /// Verdict of the smallest-hop bucket; FAIL when it is empty.
    pub primary: Verdict,
}

impl FlaringReport {
    pub fn bucket(&self, hop: (u32, u32)) -> Option<&FlaringEstimate> {
        self.buckets.iter().find(|e| e.bucket == hop)
    }

    /// Largest `λ` over the passing buckets.
    pub fn best_lambda(&self) -> Option<f64> {
        self.buckets.iter().filter_map(|e| e.lambda).reduce(f64::max)
    }
}

/// Thresholds `M` from quantiles of the central distances, ascending.
fn threshold_grid(central: &mut [u32], quantiles: usize) -> Vec<u32> {
    central.sort_unstable();
    let q = quantiles.max(1);
    let mut grid: Vec<u32> = (0..q).map(|i| central[i * central.len() / q]).collect();
    grid.dedup();
    grid
}

/// Best `(M, λ)` for one bucket of lift pairs (all with `d(0) >= 1`).
pub fn estimate(pairs: &[&LiftPair], bucket: (u32, u32), cfg: &FlareConfig) -> FlaringEstimate {
    let mut central: Vec<u32> = pairs.iter().map(|p| p.distances[p.center]).collect();
    let grid = threshold_grid(&mut central, cfg.quantiles);
    let mut rows = Vec::new();
    for &m in &grid {
        let eligible: Vec<&&LiftPair> = pairs.iter().filter(|p| p.distances[p.center] >= m).collect();
        let min_ratio = eligible.iter().map(|p| p.ratio()).fold(f64::INFINITY, f64::min);
        let lambda = if eligible.len() >= cfg.min_support {
            cfg.lambda_grid.iter().copied().filter(|&l| l <= min_ratio + 1e-12).reduce(f64::max)
        } else {
            None
        };
        rows.push(ThresholdRow { m, pairs: eligible.len(), min_ratio, lambda });
    }
    let best = rows
        .iter()
        .filter(|r| r.lambda.is_some())
        .min_by(|a, b| b.lambda.unwrap().total_cmp(&a.lambda.unwrap()).then(a.m.cmp(&b.m)));
    let flattest = |m: u32| -> Vec<FlareWitness> {
        let mut c: Vec<&&LiftPair> = pairs.iter().filter(|p| p.distances[p.center] >= m).collect();
        c.sort_by(|a, b| a.ratio().total_cmp(&b.ratio()));
        c.iter().take(3).map(|p| FlareWitness::of(p)).collect()
    };
    match best {
        Some(r) => FlaringEstimate {
            bucket,
            m: Some(r.m),
            lambda: r.lambda,
            n: cfg.window,
            verdict: Verdict::Pass,
            samples: pairs.len(),
            ratio: r.min_ratio,
            witnesses: flattest(r.m),
            rows: rows.clone(),
        },
        None => FlaringEstimate {
            bucket,
            m: None,
            lambda: None,
            n: cfg.window,
            verdict: Verdict::Fail,
            samples: pairs.len(),
            ratio: rows.first().map_or(f64::NAN, |r| r.min_ratio),
            witnesses: flattest(0),
            rows,
        },
    }
}

/// Samples lift pairs over geodesics of length `2n` and estimates flaring per bucket.
pub fn flare_test(factory: &SectionFactory<'_>, cfg: &FlareConfig) -> Result<FlaringReport> {
    let b = factory.bundle();
    let (geodesics, samples) = sample_lift_pairs(factory, cfg)?;
    let total = samples.len();
    let kept: Vec<&LiftPair> = samples.iter().filter(|p| !p.touches_boundary(b)).collect();
    let excluded = total - kept.len();
    let mut buckets = Vec::new();
    let mut unbucketed = 0;
    let mut grouped: Vec<Vec<&LiftPair>> = vec![Vec::new(); BUCKETS.len()];
    for p in kept {
        if p.distances[p.center] == 0 {
            continue;
        }
        match bucket_of(p.hop) {
            Some(i) => grouped[i].push(p),
            None => unbucketed += 1,
        }
    }
    for (i, group) in grouped.iter().enumerate() {
        if !group.is_empty() {
            buckets.push(estimate(group, BUCKETS[i], cfg));
        }
    }
    let verdict = if !buckets.is_empty() && buckets.iter().all(|e| e.verdict == Verdict::Pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let primary = buckets.iter().find(|e| e.bucket == BUCKETS[0]).map_or(Verdict::Fail, |e| e.verdict);
    Ok(FlaringReport {
        primary,
        window: cfg.window,
        geodesics,
        samples: total,
        excluded,
        unbucketed,
        policy: cfg.policy,
        buckets,
        verdict,
    })
}
