//! Splitting a ladder into subladders of bounded girth.
//!
//! Sections `X'_0 = s1, …, X'_m = s2` are built through points of an anchor
//! rung, advancing along it: from `X'_i` at position `s_i`, the next position
//! is the largest `t` whose section has horizontal distance exactly `A` to
//! `X'_i`, or else one past the largest `t` with horizontal distance at most
//! `A`. Sections through rung points are barycenter-flow sections projected
//! into the ladder.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use super::Ladder;
use crate::bundle::MetricGraphBundle;
use crate::hyperbolicity::PairSample;
use crate::sections::{measure_section_quality, project_section_into_ladder, Section, SectionFactory};

/// Multiplicative constant of the approximation layer; 1 for native graph bundles.
pub const K1: u32 = 1;

/// `A = K1 · max(A0 + K1 + 1, M + K1)`.
pub fn default_threshold(m: u32, a0: u32) -> u32 {
    K1 * (a0 + K1 + 1).max(m + K1)
}

/// Order of section footpoints along every rung.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monotonicity {
    /// `(fiber, i)` with the footpoint of `X'_{i+1}` before that of `X'_i`.
    pub violations: usize,
    /// Largest backtrack along a rung.
    pub max_backtrack: u32,
    /// Largest uniform qi constant among the sections.
    pub k: f64,
    /// `4 k²`.
    pub slack: f64,
    pub within_slack: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub anchor: u32,
    pub a: u32,
    /// Length of the anchor rung.
    pub rung_length: usize,
    /// Anchor-rung positions `s_0 < … < s_m`.
    pub footpoints: Vec<usize>,
    pub sections: Vec<Section>,
    /// Horizontal distance of each consecutive pair.
    pub girths: Vec<u32>,
    /// For consecutive pairs farther apart than `A`: a position whose section
    /// is within `A` of both.
    pub intermediates: Vec<Option<usize>>,
    pub monotonicity: Monotonicity,
}

/// `min_b d_b(s(b), t(b))`.
pub fn horizontal_distance(b: &MetricGraphBundle, s: &Section, t: &Section) -> u32 {
    b.base().vertices().map(|w| b.fdist(s.at(w), t.at(w))).min().unwrap_or(0)
}

/// Decomposes `l` at threshold `a`. The anchor defaults to the base vertex with
/// the longest rung (lowest id among ties).
pub fn decompose_ladder(
    b: &MetricGraphBundle,
    l: &Ladder,
    a: u32,
    factory: &SectionFactory<'_>,
    anchor: Option<u32>,
) -> DecompositionRecord {
    let lengths = l.rung_lengths();
    let anchor = anchor.unwrap_or_else(|| {
        let best = *lengths.iter().max().unwrap();
        lengths.iter().position(|&x| x == best).unwrap() as u32
    });
    let alpha = l.rung(anchor).vertices().to_vec();
    let len = alpha.len() - 1;
    let mut memo: HashMap<usize, Section> = HashMap::new();
    let mut section_at = |t: usize| -> Section {
        memo.entry(t)
            .or_insert_with(|| {
                if t == 0 {
                    l.s1().clone()
                } else if t == len {
                    l.s2().clone()
                } else {
                    project_section_into_ladder(b, l, &factory.through(alpha[t]))
                }
            })
            .clone()
    };

    let mut footpoints = vec![0usize];
    let mut sections = vec![l.s1().clone()];
    loop {
        let (si, xi) = (*footpoints.last().unwrap(), sections.last().unwrap().clone());
        if horizontal_distance(b, &xi, l.s2()) <= a || si == len {
            if si != len {
                footpoints.push(len);
                sections.push(l.s2().clone());
            }
            break;
        }
        let mut exact = None;
        let mut reach = si;
        for t in si + 1..=len {
            let h = horizontal_distance(b, &section_at(t), &xi);
            if h <= a {
                reach = t;
            }
            if h == a {
                exact = Some(t);
            }
        }
        let next = exact.unwrap_or((reach + 1).min(len));
        footpoints.push(next);
        sections.push(section_at(next));
    }

    let girths: Vec<u32> = sections.windows(2).map(|w| horizontal_distance(b, &w[0], &w[1])).collect();
    let intermediates = (0..girths.len())
        .map(|i| {
            if girths[i] <= a {
                return None;
            }
            (footpoints[i]..=footpoints[i + 1]).find(|&t| {
                let s = section_at(t);
                horizontal_distance(b, &s, &sections[i]) <= a && horizontal_distance(b, &s, &sections[i + 1]) <= a
            })
        })
        .collect();
    let monotonicity = monotonicity(b, l, &sections);
    DecompositionRecord {
        anchor,
        a,
        rung_length: len,
        footpoints,
        sections,
        girths,
        intermediates,
        monotonicity,
    }
}

fn monotonicity(b: &MetricGraphBundle, l: &Ladder, sections: &[Section]) -> Monotonicity {
    let mut violations = 0;
    let mut max_backtrack = 0;
    for w in b.base().vertices() {
        let pos: Vec<usize> = sections
            .iter()
            .map(|s| l.position(b, s.at(w)).expect("in-ladder sections lie on rungs"))
            .collect();
        for p in pos.windows(2) {
            if p[1] < p[0] {
                violations += 1;
                max_backtrack = max_backtrack.max((p[0] - p[1]) as u32);
            }
        }
    }
    let k = sections
        .iter()
        .map(|s| measure_section_quality(b, s, &PairSample::default()).uniform())
        .fold(1.0, f64::max);
    let slack = 4.0 * k * k;
    Monotonicity { violations, max_backtrack, k, slack, within_slack: max_backtrack as f64 <= slack }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::generate_product_bundle;
    use crate::graph::generators::path;
    use crate::ladders::build_ladder;
    use crate::sections::FlowConfig;

    #[test]
    fn thresholds() {
        assert_eq!(default_threshold(0, 0), 2);
        assert_eq!(default_threshold(5, 0), 6);
        assert_eq!(default_threshold(3, 7), 9);
    }

    #[test]
    fn small_girth_is_one_step() {
        let b = generate_product_bundle(&path(4), &path(12)).unwrap();
        let l = build_ladder(&b, &Section::transit(&b, 1).unwrap(), &Section::transit(&b, 3).unwrap(), 1).unwrap();
        let f = SectionFactory::new(&b, FlowConfig::default());
        let r = decompose_ladder(&b, &l, 3, &f, None);
        assert_eq!(r.footpoints, vec![0, 2]);
        assert_eq!(r.sections.len(), 2);
        assert_eq!(r.girths, vec![2]);
    }

    #[test]
    fn product_rung_is_covered_in_order() {
        let b = generate_product_bundle(&path(5), &path(31)).unwrap();
        let l = build_ladder(&b, &Section::transit(&b, 10).unwrap(), &Section::transit(&b, 20).unwrap(), 1).unwrap();
        let f = SectionFactory::new(&b, FlowConfig::default());
        let r = decompose_ladder(&b, &l, 3, &f, Some(2));
        assert_eq!(r.rung_length, 10);
        assert!(r.footpoints.windows(2).all(|w| w[0] < w[1]));
        assert_eq!((*r.footpoints.first().unwrap(), *r.footpoints.last().unwrap()), (0, 10));
        assert_eq!(r.footpoints, vec![0, 3, 6, 9, 10]);
        assert!(r.girths.iter().all(|&g| g <= 3));
        assert_eq!(r.monotonicity.violations, 0);
        assert!(r.monotonicity.within_slack);
    }
}
