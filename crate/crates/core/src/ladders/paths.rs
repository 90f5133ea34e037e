//! Families of discrete paths `c(x, y)`.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{build_ladder, Ladder};
use crate::bundle::MetricGraphBundle;
use crate::graph::Graph;
use crate::sections::{level_set, project_section_into_ladder, SectionFactory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathKind {
    Canonical,
    SmallGirth,
    LadderGeodesic,
    Global,
}

/// Pieces of a small-girth path: lift in the first section, rung crossing, lift in the second.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segments {
    pub lift1: Vec<u32>,
    pub rung: Vec<u32>,
    pub lift2: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscretePath {
    pub x: u32,
    pub y: u32,
    pub path: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segments: Option<Segments>,
}

impl DiscretePath {
    pub fn plain(x: u32, y: u32, path: Vec<u32>) -> DiscretePath {
        DiscretePath { x, y, path, segments: None }
    }

    /// Sum of distances between successive points.
    pub fn length(&self, g: &Graph) -> u32 {
        self.path.windows(2).map(|w| g.dist(w[0], w[1])).sum()
    }

    /// Largest distance between successive points.
    pub fn max_gap(&self, g: &Graph) -> u32 {
        self.path.windows(2).map(|w| g.dist(w[0], w[1])).max().unwrap_or(0)
    }
}

pub trait PathFamily: Sync {
    fn kind(&self) -> PathKind;
    /// The ambient graph whose metric measures the paths.
    fn graph(&self) -> &Graph;
    fn path(&self, x: u32, y: u32) -> Arc<DiscretePath>;
}

/// Canonical geodesics of a graph.
pub struct CanonicalGeodesics<'a> {
    pub graph: &'a Graph,
}

impl PathFamily for CanonicalGeodesics<'_> {
    fn kind(&self) -> PathKind {
        PathKind::Canonical
    }

    fn graph(&self) -> &Graph {
        self.graph
    }

    fn path(&self, x: u32, y: u32) -> Arc<DiscretePath> {
        Arc::new(DiscretePath::plain(x, y, self.graph.geodesic_unchecked(x, y).0))
    }
}

type Memo = Mutex<HashMap<(u32, u32), Arc<DiscretePath>>>;

fn memoized(memo: &Memo, key: (u32, u32), build: impl FnOnce() -> DiscretePath) -> Arc<DiscretePath> {
    if let Some(p) = memo.lock().unwrap().get(&key) {
        return p.clone();
    }
    let p = Arc::new(build());
    memo.lock().unwrap().insert(key, p.clone());
    p
}

/// `c(x, y)`: canonical geodesic inside `C_L(s_x, s_y)` for the barycenter-flow
/// sections through `x` and `y`.
pub struct GlobalPaths<'a> {
    factory: SectionFactory<'a>,
    radius: u32,
    memo: Memo,
}

impl<'a> GlobalPaths<'a> {
    pub fn new(factory: SectionFactory<'a>, radius: u32) -> GlobalPaths<'a> {
        GlobalPaths { factory, radius, memo: Mutex::new(HashMap::new()) }
    }

    pub fn factory(&self) -> &SectionFactory<'a> {
        &self.factory
    }
}

impl PathFamily for GlobalPaths<'_> {
    fn kind(&self) -> PathKind {
        PathKind::Global
    }

    fn graph(&self) -> &Graph {
        self.factory.bundle().total()
    }

    fn path(&self, x: u32, y: u32) -> Arc<DiscretePath> {
        memoized(&self.memo, (x, y), || {
            if x == y {
                return DiscretePath::plain(x, y, vec![x]);
            }
            let b = self.factory.bundle();
            let (sx, sy) = (self.factory.through(x), self.factory.through(y));
            let l = build_ladder(b, &sx, &sy, self.radius).expect("sections of a valid bundle");
            let p = l.neighborhood().geodesic(x, y).expect("x and y lie on the ladder");
            DiscretePath::plain(x, y, p.0)
        })
    }
}

/// Paths between points of one ladder that descend to a fiber where the
/// in-ladder sections through the endpoints come within `A`.
pub struct SmallGirthPaths<'a> {
    bundle: &'a MetricGraphBundle,
    ladder: &'a Ladder,
    factory: &'a SectionFactory<'a>,
    a: u32,
    memo: Memo,
}

impl<'a> SmallGirthPaths<'a> {
    pub fn new(ladder: &'a Ladder, factory: &'a SectionFactory<'a>, a: u32) -> SmallGirthPaths<'a> {
        SmallGirthPaths { bundle: factory.bundle(), ladder, factory, a, memo: Mutex::new(HashMap::new()) }
    }

    fn build(&self, x: u32, y: u32) -> DiscretePath {
        let b = self.bundle;
        let l = self.ladder;
        let s3 = project_section_into_ladder(b, l, &self.factory.through(l.nearest_on_rung(b, x)));
        let s4 = project_section_into_ladder(b, l, &self.factory.through(l.nearest_on_rung(b, y)));
        let mut a = self.a;
        let mut u = level_set(b, &s3, &s4, a);
        while u.is_empty() {
            let raised = 2 * a + 1;
            log::info!("level set empty at A = {a}; raising to {raised}");
            a = raised;
            u = level_set(b, &s3, &s4, a);
        }
        let base = b.base();
        let (px, py) = (b.proj(x), b.proj(y));
        let row = base.row(px);
        let meet = *u.iter().min_by_key(|&&w| (row.get(w), w)).unwrap();
        let lift1: Vec<u32> = base.geodesic_unchecked(px, meet).0.iter().map(|&w| s3.at(w)).collect();
        let lift2: Vec<u32> = base.geodesic_unchecked(meet, py).0.iter().map(|&w| s4.at(w)).collect();
        let rung_path = l.rung(meet).vertices();
        let (i, j) = (l.position(b, s3.at(meet)).unwrap(), l.position(b, s4.at(meet)).unwrap());
        let rung: Vec<u32> = if i <= j {
            rung_path[i..=j].to_vec()
        } else {
            rung_path[j..=i].iter().rev().copied().collect()
        };
        let mut path = lift1.clone();
        path.extend(&rung[1..]);
        path.extend(&lift2[1..]);
        DiscretePath { x, y, path, segments: Some(Segments { lift1, rung, lift2 }) }
    }
}

impl PathFamily for SmallGirthPaths<'_> {
    fn kind(&self) -> PathKind {
        PathKind::SmallGirth
    }

    fn graph(&self) -> &Graph {
        self.bundle.total()
    }

    fn path(&self, x: u32, y: u32) -> Arc<DiscretePath> {
        memoized(&self.memo, (x, y), || self.build(x, y))
    }
}
