//! Flaring of a single ladder over a base geodesic.
//!
//! The ladder is restricted to a geodesic `γ: [-n, n]` through a center
//! base vertex. When the central rung is at least the threshold `M`, the
//! check asks for doubling: `max(d(-n), d(n)) >= 2 d(0)`. The ladder is also
//! split by [`decompose_ladder`] and the doubling of every subladder reported.

use serde::{Deserialize, Serialize};

use crate::bundle::MetricGraphBundle;
use crate::error::{Error, Result};
use crate::ladders::{decompose_ladder, Ladder, Verdict};
use crate::sections::SectionFactory;

/// `⌈ln 2 / h⌉ + 1` base steps for a mesh of size `h`.
pub fn default_window(mesh: f64) -> usize {
    (std::f64::consts::LN_2 / mesh).ceil() as usize + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderFlareConfig {
    pub window: usize,
    /// Central girth `M` from which doubling is required.
    pub threshold: u32,
    /// Decomposition threshold `A`.
    pub a: u32,
    /// Center of `γ`; by default the valid center with the longest clean rung.
    pub center: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LadderType {
    /// The central rung is a single point.
    Vacuous,
    /// The central rung is shorter than the threshold.
    BelowThreshold,
    /// One subladder of girth at most `A`.
    Type1,
    /// Some subladder needed an intermediate section within `A` of both sides.
    Type2,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubladderFlare {
    /// Anchor-rung positions bounding the subladder.
    pub footpoints: (usize, usize),
    pub central: u32,
    pub ends: (u32, u32),
    pub doubled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderFlare {
    pub kind: LadderType,
    pub center: u32,
    pub gamma: Vec<u32>,
    /// Rung lengths along `γ`.
    pub girths: Vec<u32>,
    pub central: u32,
    pub ends: (u32, u32),
    pub doubled: bool,
    pub verdict: Verdict,
    /// Some rung in the window touches a truncation boundary.
    pub boundary: bool,
    pub subladders: Vec<SubladderFlare>,
}

/// Geodesic `[p, q]` of length `2n` with midpoint `c`, lowest ids first.
fn window_through(b: &MetricGraphBundle, c: u32, n: u32) -> Option<Vec<u32>> {
    let base = b.base();
    let row = base.row(c);
    let ring: Vec<u32> = base.vertices().filter(|&v| row.get(v) == n).collect();
    for &p in &ring {
        let prow = base.row(p);
        if let Some(&q) = ring.iter().find(|&&q| prow.get(q) == 2 * n) {
            let mut gamma = base.geodesic_unchecked(p, c).0;
            gamma.extend(&base.geodesic_unchecked(c, q).0[1..]);
            return Some(gamma);
        }
    }
    None
}

pub fn ladder_flare_check(
    b: &MetricGraphBundle,
    l: &Ladder,
    factory: &SectionFactory<'_>,
    cfg: &LadderFlareConfig,
) -> Result<LadderFlare> {
    let n = cfg.window as u32;
    let lengths = l.rung_lengths();
    let windows: Vec<(u32, Vec<u32>)> = match cfg.center {
        Some(c) => window_through(b, c, n).map(|g| (c, g)).into_iter().collect(),
        None => b.base().vertices().filter_map(|c| window_through(b, c, n).map(|g| (c, g))).collect(),
    };
    if windows.is_empty() {
        return Err(Error::InstanceTooSmall(format!("no base geodesic of length {} through a center", 2 * n)));
    }
    let touches = |gamma: &[u32]| gamma.iter().any(|&w| l.rung(w).vertices().iter().any(|&v| b.is_boundary(v)));
    let (center, gamma) = windows
        .iter()
        .max_by_key(|(c, g)| (!touches(g), lengths[*c as usize], std::cmp::Reverse(*c)))
        .cloned()
        .unwrap();
    let girths: Vec<u32> = gamma.iter().map(|&w| lengths[w as usize]).collect();
    let central = lengths[center as usize];
    let ends = (girths[0], *girths.last().unwrap());
    let doubled = ends.0.max(ends.1) >= 2 * central;
    let boundary = touches(&gamma);
    let base = |kind, verdict, subladders| LadderFlare {
        kind,
        center,
        gamma: gamma.clone(),
        girths: girths.clone(),
        central,
        ends,
        doubled,
        verdict,
        boundary,
        subladders,
    };
    if central == 0 {
        return Ok(base(LadderType::Vacuous, Verdict::Pass, Vec::new()));
    }
    if central < cfg.threshold {
        return Ok(base(LadderType::BelowThreshold, Verdict::Pass, Vec::new()));
    }
    let rec = decompose_ladder(b, l, cfg.a, factory, Some(center));
    let (first, last) = (gamma[0], *gamma.last().unwrap());
    let subladders: Vec<SubladderFlare> = rec
        .sections
        .windows(2)
        .zip(rec.footpoints.windows(2))
        .map(|(s, f)| {
            let d = |w: u32| b.fdist(s[0].at(w), s[1].at(w));
            let (c, e) = (d(center), (d(first), d(last)));
            SubladderFlare { footpoints: (f[0], f[1]), central: c, ends: e, doubled: e.0.max(e.1) >= 2 * c }
        })
        .collect();
    let kind = if subladders.len() == 1 {
        LadderType::Type1
    } else if rec.intermediates.iter().any(|i| i.is_some()) {
        LadderType::Type2
    } else {
        LadderType::General
    };
    let verdict = if doubled { Verdict::Pass } else { Verdict::Fail };
    Ok(base(kind, verdict, subladders))
}
