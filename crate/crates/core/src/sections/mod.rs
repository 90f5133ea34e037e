//! Quasi-isometric sections of metric graph bundles.
//!
//! A [`Section`] picks one vertex in every fiber. Sections come from
//! barycenter flow ([`SectionFactory`]), from projecting another section onto
//! a ladder, from transits of a single vertex, or from user input.

mod flow;

use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

use crate::bundle::MetricGraphBundle;
use crate::error::{Error, Result};
use crate::graph::parse_edge_list;
use crate::hyperbolicity::{quasiconvexity_constant, PairSample, QiFit};
use crate::ladders::Ladder;

pub use flow::{
    barycenter_flow_section, barycenter_surjectivity_report, default_separation, far_triple,
    far_triple_near, FarTriple, FiberCoverage, FlowConfig, SectionFactory, TRIPLE_POOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectionKind {
    BarycenterFlow,
    Projection,
    Constant,
    User,
}

/// A flowed triple was replaced in fiber `fiber` on the way to `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReAnchor {
    pub target: u32,
    pub fiber: u32,
}

/// How a section was built.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionLog {
    pub through: Option<u32>,
    pub triple: Option<FarTriple>,
    /// Fiber distance from `through` to the barycenter of the chosen triple.
    pub barycenter_distance: Option<u32>,
    /// The value at the fiber of `through` was overwritten with `through`.
    pub patched: bool,
    /// No separated triple existed; the section is the transit of `through`.
    pub fallback: bool,
    pub re_anchors: Vec<ReAnchor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    values: Vec<u32>,
    kind: SectionKind,
    log: SectionLog,
}

impl Section {
    /// Checks that `values[b]` lies over `b` for every base vertex.
    pub fn new(b: &MetricGraphBundle, values: Vec<u32>, kind: SectionKind) -> Result<Section> {
        if values.len() != b.base().vertex_count() {
            return Err(Error::BadSection(values.len().min(b.base().vertex_count()) as u32));
        }
        for (w, &v) in values.iter().enumerate() {
            if v as usize >= b.total().vertex_count() || b.proj(v) != w as u32 {
                return Err(Error::BadSection(w as u32));
            }
        }
        Ok(Section { values, kind, log: SectionLog::default() })
    }

    pub(crate) fn from_parts(values: Vec<u32>, kind: SectionKind, log: SectionLog) -> Section {
        Section { values, kind, log }
    }

    /// The section `w ↦ transit(x, w)`.
    pub fn transit(b: &MetricGraphBundle, x: u32) -> Result<Section> {
        b.total().check_vertex(x)?;
        let values = b.base().vertices().map(|w| b.transit(x, w)).collect();
        let log = SectionLog { through: Some(x), ..Default::default() };
        Ok(Section { values, kind: SectionKind::Constant, log })
    }

    pub fn at(&self, w: u32) -> u32 {
        self.values[w as usize]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn kind(&self) -> SectionKind {
        self.kind
    }

    pub fn log(&self) -> &SectionLog {
        &self.log
    }

    pub fn with_value(mut self, w: u32, v: u32) -> Section {
        self.values[w as usize] = v;
        self.kind = SectionKind::User;
        self
    }
}

/// Reads `base-vertex total-vertex` lines.
pub fn read_section<R: BufRead>(b: &MetricGraphBundle, reader: R) -> Result<Section> {
    let lines: Vec<String> = reader
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let pairs = parse_edge_list(lines.iter().map(|s| s.as_str()), 1)?;
    let nb = b.base().vertex_count();
    let mut values = vec![u32::MAX; nb];
    for (w, v) in pairs {
        *values.get_mut(w as usize).ok_or(Error::InvalidVertex { id: w, count: nb })? = v;
    }
    if let Some(w) = values.iter().position(|&v| v == u32::MAX) {
        return Err(Error::BadSection(w as u32));
    }
    Section::new(b, values, SectionKind::User)
}

pub fn write_section<W: Write>(s: &Section, mut w: W) -> std::io::Result<()> {
    for (b, v) in s.values.iter().enumerate() {
        writeln!(w, "{b} {v}")?;
    }
    Ok(())
}

/// A pair of base vertices where the fitted constants are tight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QualityWitness {
    pub w: u32,
    pub z: u32,
    pub base_distance: u32,
    pub total_distance: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionQuality {
    pub k: f64,
    pub eps: u32,
    pub within_grid: bool,
    /// Largest total distance between values over adjacent base vertices.
    pub max_hop: u32,
    pub pairs: usize,
    pub exhaustive: bool,
    /// Pairs with total distance below base distance; always zero for a valid bundle.
    pub lower_bound_violations: usize,
    pub witness: Option<QualityWitness>,
}

impl SectionQuality {
    /// `max(k, eps)`.
    pub fn uniform(&self) -> f64 {
        self.k.max(self.eps as f64)
    }
}

/// Base graphs up to this size are measured over all pairs.
pub const QUALITY_EXHAUSTIVE: usize = 400;

pub fn measure_section_quality(b: &MetricGraphBundle, s: &Section, sample: &PairSample) -> SectionQuality {
    let base = b.base();
    let nb = base.vertex_count();
    let exhaustive = nb <= QUALITY_EXHAUSTIVE;
    let verts: Vec<u32> = base.vertices().collect();
    let pairs: Vec<(u32, u32)> = if exhaustive {
        PairSample { max_pairs: usize::MAX, seed: 0 }.pairs(&verts)
    } else {
        sample.pairs(&verts)
    };
    let mut fit = QiFit::new();
    let mut lower = 0;
    let mut measured = Vec::with_capacity(pairs.len());
    for &(w, z) in &pairs {
        let d = base.dist(w, z);
        let e = b.total().dist(s.at(w), s.at(z));
        if e < d {
            lower += 1;
        }
        fit.add(d, e);
        measured.push((w, z, d, e));
    }
    let max_hop = base.edges().map(|(w, z)| b.total().dist(s.at(w), s.at(z))).max().unwrap_or(0);
    let q = fit.params();
    let witness = measured
        .iter()
        .map(|&(w, z, d, e)| {
            let need = (d as f64 / q.k - e as f64).max(e as f64 - q.k * d as f64);
            (need, std::cmp::Reverse((w, z)), QualityWitness { w, z, base_distance: d, total_distance: e })
        })
        .max_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|t| t.2);
    SectionQuality {
        k: q.k,
        eps: q.eps,
        within_grid: q.within_grid,
        max_hop,
        pairs: pairs.len(),
        exhaustive,
        lower_bound_violations: lower,
        witness,
    }
}

/// Replaces each value by its nearest point (fiber metric, lowest id) on the ladder's rung.
pub fn project_section_into_ladder(b: &MetricGraphBundle, ladder: &Ladder, s: &Section) -> Section {
    let values = b
        .base()
        .vertices()
        .map(|w| ladder.nearest_on_rung(b, s.at(w)))
        .collect();
    let log = SectionLog { through: s.log.through, ..Default::default() };
    Section { values, kind: SectionKind::Projection, log }
}

/// `U_A = {b : d_b(s1(b), s2(b)) <= A}`.
pub fn level_set(b: &MetricGraphBundle, s1: &Section, s2: &Section, a: u32) -> Vec<u32> {
    b.base().vertices().filter(|&w| b.fdist(s1.at(w), s2.at(w)) <= a).collect()
}

/// A base vertex outside the level set, with its distance to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutsideVertex {
    pub base: u32,
    pub fiber_distance: u32,
    pub distance_to_set: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSetReport {
    pub a: u32,
    pub set: Vec<u32>,
    pub quasiconvexity: Option<u32>,
    pub diameter: Option<u32>,
    /// Every base vertex outside the set, largest fiber distance first.
    pub outside: Vec<OutsideVertex>,
    pub max_distance_to_set: Option<u32>,
}

pub fn level_set_report(b: &MetricGraphBundle, s1: &Section, s2: &Section, a: u32) -> LevelSetReport {
    let set = level_set(b, s1, s2, a);
    if set.is_empty() {
        return LevelSetReport {
            a,
            set,
            quasiconvexity: None,
            diameter: None,
            outside: Vec::new(),
            max_distance_to_set: None,
        };
    }
    let base = b.base();
    let qc = quasiconvexity_constant(base, &set, &PairSample::default()).expect("nonempty set");
    let diameter = set.iter().flat_map(|&u| set.iter().map(move |&v| (u, v))).map(|(u, v)| base.dist(u, v)).max();
    let to_set = base.multi_source_bfs(&set, u32::MAX);
    let mut outside: Vec<OutsideVertex> = base
        .vertices()
        .filter(|&w| to_set[w as usize] > 0)
        .map(|w| OutsideVertex {
            base: w,
            fiber_distance: b.fdist(s1.at(w), s2.at(w)),
            distance_to_set: to_set[w as usize],
        })
        .collect();
    outside.sort_by_key(|o| (std::cmp::Reverse(o.fiber_distance), o.base));
    let max_distance_to_set = Some(outside.iter().map(|o| o.distance_to_set).max().unwrap_or(0));
    LevelSetReport { a, set, quasiconvexity: Some(qc), diameter, outside, max_distance_to_set }
}
