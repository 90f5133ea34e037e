//! Hyperbolicity of total space and fibers next to the flaring verdict.

use serde::{Deserialize, Serialize};

use super::{flare_test, FlareConfig, BUCKETS};
use crate::error::Error;
use crate::hyperbolicity::{delta_four_point, delta_four_point_sampled};
use crate::ladders::Verdict;
use crate::sections::SectionFactory;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NecessityPolicy {
    /// Graphs up to this size get the exact four-point constant.
    pub exact_max: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for NecessityPolicy {
    fn default() -> Self {
        NecessityPolicy { exact_max: 1500, samples: 200_000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessityReport {
    pub total_vertices: usize,
    pub delta_total: f64,
    pub exact: bool,
    pub delta_fibers_max: f64,
    /// Flaring verdict of the smallest-hop bucket.
    pub flaring: Verdict,
    /// No base geodesic is long enough for the window; flaring holds vacuously.
    pub vacuous: bool,
    pub lambda: Option<f64>,
}

fn delta(g: &crate::graph::Graph, policy: &NecessityPolicy) -> (f64, bool) {
    if g.vertex_count() <= policy.exact_max {
        (delta_four_point(g).expect("below the exact cap").as_f64(), true)
    } else {
        (delta_four_point_sampled(g, policy.samples, policy.seed).as_f64(), false)
    }
}

pub fn necessity_report(factory: &SectionFactory<'_>, flare: &FlareConfig, policy: &NecessityPolicy) -> NecessityReport {
    let b = factory.bundle();
    let (delta_total, exact) = delta(b.total(), policy);
    let delta_fibers_max = b.fibers().iter().map(|f| delta(&f.graph, policy).0).fold(0.0, f64::max);
    let (flaring, vacuous, lambda) = match flare_test(factory, flare) {
        Ok(r) => (r.primary, false, r.bucket(BUCKETS[0]).and_then(|e| e.lambda)),
        Err(Error::InstanceTooSmall(_)) => (Verdict::Pass, true, None),
        Err(e) => panic!("flaring sample failed: {e}"),
    };
    NecessityReport {
        total_vertices: b.total().vertex_count(),
        delta_total,
        exact,
        delta_fibers_max,
        flaring,
        vacuous,
        lambda,
    }
}

/// Agreement of a series of growing instances with the expected implication:
/// failing flaring comes with growing `δ`, and stable `δ` with passing flaring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleConsistency {
    pub delta_increasing: bool,
    /// Last `δ` within half a unit of the first.
    pub delta_stable: bool,
    pub any_fail: bool,
    pub all_pass: bool,
    pub consistent: bool,
}

pub fn scale_consistency(series: &[NecessityReport]) -> ScaleConsistency {
    let deltas: Vec<f64> = series.iter().map(|r| r.delta_total).collect();
    let delta_increasing = deltas.len() >= 2 && deltas.windows(2).all(|w| w[1] > w[0]);
    let delta_stable = match (deltas.first(), deltas.last()) {
        (Some(a), Some(z)) => deltas.len() >= 2 && *z <= a + 0.5,
        _ => false,
    };
    let any_fail = series.iter().any(|r| r.flaring == Verdict::Fail);
    let all_pass = series.iter().all(|r| r.flaring == Verdict::Pass);
    let consistent = (!any_fail || delta_increasing) && (!delta_stable || all_pass);
    ScaleConsistency { delta_increasing, delta_stable, any_fail, all_pass, consistent }
}
