//! Cayley-graph bundles of free-by-abelian extensions, truncated to balls.
//!
//! The fiber over every base point is the ball of radius `R` in the Cayley
//! graph of F(a, b) (right multiplication by `a`, `b`). Over a base edge in
//! direction `k`, `(w, p)` is joined to `(φ_k(w), p + e_k)`. When `φ_k(w)` or
//! `φ_k⁻¹(w)` leaves the ball, the vertex is instead joined to the radius-`R`
//! prefix of the image, and both endpoints are flagged as boundary.

use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::HashMap;

use super::free_group::{ball, ball_index, Automorphism, Word};
use super::{verify_bundle, MetricGraphBundle};
use crate::error::{Error, Result};
use crate::graph::generators::{grid, path};
use crate::graph::Graph;

/// Longest preimage word searched when inverting a monodromy.
const INVERSE_SEARCH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionBase {
    /// Path with this many vertices.
    Interval(usize),
    /// Square grid with this side.
    Box(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub radius: usize,
    pub base: ExtensionBase,
    /// One automorphism string per base direction, e.g. `"a->ab,b->a"`.
    /// Missing directions use the identity.
    pub monodromy: Vec<String>,
}

impl ExtensionSpec {
    fn automorphisms(&self) -> Result<Vec<Automorphism>> {
        let dims = match self.base {
            ExtensionBase::Interval(_) => 1,
            ExtensionBase::Box(_) => 2,
        };
        if self.monodromy.len() > dims {
            return Err(Error::Monodromy(format!(
                "{} automorphisms for a {dims}-dimensional base",
                self.monodromy.len()
            )));
        }
        let mut phis =
            self.monodromy.iter().map(|s| Automorphism::parse(s)).collect::<Result<Vec<_>>>()?;
        phis.resize(dims, Automorphism::identity());
        if dims == 2 {
            let (ab, ba) = (phis[0].compose(&phis[1]), phis[1].compose(&phis[0]));
            if ab.a != ba.a {
                return Err(Error::NonCommutingMonodromy('a'));
            }
            if ab.b != ba.b {
                return Err(Error::NonCommutingMonodromy('b'));
            }
        }
        Ok(phis)
    }

    fn base_graph(&self) -> Result<(Graph, usize)> {
        match self.base {
            ExtensionBase::Interval(n) if n > 0 => Ok((path(n), n)),
            ExtensionBase::Box(s) if s > 0 => Ok((grid(s, s), s)),
            _ => Err(Error::InvalidParameter("empty extension base".into())),
        }
    }
}

/// Where a map sends each ball index: the exact image when it stays in the
/// ball, otherwise the index of the image's radius-`R` prefix.
struct BallMap {
    target: Vec<u32>,
    exact: Vec<bool>,
}

fn ball_map(words: &[Word], index: &HashMap<Word, u32>, radius: usize, phi: &Automorphism) -> BallMap {
    let mut target = Vec::with_capacity(words.len());
    let mut exact = Vec::with_capacity(words.len());
    for w in words {
        let img = phi.apply(w);
        exact.push(img.len() <= radius);
        target.push(index[&img.prefix(radius)]);
    }
    BallMap { target, exact }
}

pub fn generate_extension_bundle(spec: &ExtensionSpec) -> Result<MetricGraphBundle> {
    let phis = spec.automorphisms()?;
    let (base, side) = spec.base_graph()?;
    let words = ball(spec.radius);
    let index = ball_index(&words);
    let m = words.len();
    let nb = base.vertex_count();
    let id = |p: usize, k: usize| (p * m + k) as u32;

    let mut edges = Vec::new();
    for p in 0..nb {
        for (k, w) in words.iter().enumerate() {
            for l in [1i8, 2] {
                let mut v = w.clone();
                v.push(l);
                if let Some(&j) = index.get(&v) {
                    edges.push((id(p, k), id(p, j as usize)));
                }
            }
        }
    }

    let mut boundary = vec![false; nb * m];
    for (dir, phi) in phis.iter().enumerate() {
        let fwd = ball_map(&words, &index, spec.radius, phi);
        let bwd = ball_map(&words, &index, spec.radius, &phi.inverse(INVERSE_SEARCH)?);
        for (p, q) in base.edges() {
            let step = if dir == 0 { 1 } else { side };
            if q as usize != p as usize + step {
                continue;
            }
            let (p, q) = (p as usize, q as usize);
            for k in 0..m {
                let (x, y) = (id(p, k), id(q, fwd.target[k] as usize));
                edges.push((x, y));
                if !fwd.exact[k] {
                    boundary[x as usize] = true;
                    boundary[y as usize] = true;
                }
                if !bwd.exact[k] {
                    let (x, y) = (id(q, k), id(p, bwd.target[k] as usize));
                    edges.push((x, y));
                    boundary[x as usize] = true;
                    boundary[y as usize] = true;
                }
            }
        }
    }

    let labels = (0..nb)
        .flat_map(|p| {
            let words = &words;
            let coord = match spec.base {
                ExtensionBase::Interval(_) => format!("{p}"),
                ExtensionBase::Box(s) => format!("{},{}", p % s, p / s),
            };
            (0..m).map(move |k| format!("({},{coord})", words[k]))
        })
        .collect();
    let total = Graph::from_edges(nb * m, edges)?.with_labels(labels)?;
    let proj = (0..nb * m).map(|v| (v / m) as u32).collect();
    Ok(verify_bundle(total, base, proj)?.with_boundary(boundary)?.with_provenance(json!({
        "generator": "extension",
        "radius": spec.radius,
        "base": spec.base,
        "monodromy": phis.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "ball_size": m,
    })))
}

/// Orbit of a word under the first monodromy along an interval base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyLift {
    /// `φ^i(start)` over base vertex `i`.
    pub words: Vec<String>,
    pub lengths: Vec<usize>,
    /// Total-space vertex of `(φ^i(start), i)` while it lies in the ball.
    pub vertices: Vec<Option<u32>>,
}

pub fn monodromy_lift(spec: &ExtensionSpec, start: &str) -> Result<MonodromyLift> {
    let ExtensionBase::Interval(n) = spec.base else {
        return Err(Error::InvalidParameter("monodromy lifts need an interval base".into()));
    };
    let phi = spec.automorphisms()?.remove(0);
    let words = ball(spec.radius);
    let index = ball_index(&words);
    let mut w = Word::parse(start)?;
    let mut out = MonodromyLift { words: Vec::new(), lengths: Vec::new(), vertices: Vec::new() };
    for i in 0..n {
        out.words.push(w.to_string());
        out.lengths.push(w.len());
        out.vertices.push(index.get(&w).map(|&k| (i * words.len()) as u32 + k));
        w = phi.apply(&w);
    }
    Ok(out)
}
