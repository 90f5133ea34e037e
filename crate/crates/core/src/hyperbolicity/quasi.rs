//! Grid-fitted quasi-isometry constants.
//!
//! A map is a `(k, eps)` quasi-isometric embedding when
//! `d/k - eps <= d' <= k d + eps` for every pair, with `d` the domain distance
//! and `d'` the image distance. Constants are searched on the grid
//! `k ∈ {1, 1.25, …, 8}`, `eps ∈ {0, …, 32}`: smallest `k` first, then
//! smallest `eps`.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Path};

pub const K_STEPS: usize = 29;
pub const EPS_MAX: u32 = 32;

pub fn k_grid() -> impl Iterator<Item = f64> {
    (0..K_STEPS).map(|i| 1.0 + 0.25 * i as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiGeodesicParams {
    pub k: f64,
    pub eps: u32,
    /// False when no grid point fits; `eps` is then what `k = 8` needs.
    pub within_grid: bool,
}

impl QuasiGeodesicParams {
    /// `max(k, eps)`: a single constant `K` with the map a `(K, K)` embedding.
    pub fn uniform(&self) -> f64 {
        self.k.max(self.eps as f64)
    }
}

/// Accumulates `(domain, image)` distance pairs and fits grid constants.
#[derive(Debug, Clone)]
pub struct QiFit {
    need: [f64; K_STEPS],
    pairs: usize,
}

impl Default for QiFit {
    fn default() -> Self {
        QiFit { need: [0.0; K_STEPS], pairs: 0 }
    }
}

impl QiFit {
    pub fn new() -> QiFit {
        QiFit::default()
    }

    #[inline]
    pub fn add(&mut self, domain: u32, image: u32) {
        let (d, e) = (domain as f64, image as f64);
        for (i, k) in k_grid().enumerate() {
            let need = (d / k - e).max(e - k * d);
            if need > self.need[i] {
                self.need[i] = need;
            }
        }
        self.pairs += 1;
    }

    pub fn merge(mut self, other: &QiFit) -> QiFit {
        for i in 0..K_STEPS {
            self.need[i] = self.need[i].max(other.need[i]);
        }
        self.pairs += other.pairs;
        self
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn params(&self) -> QuasiGeodesicParams {
        for (i, k) in k_grid().enumerate() {
            let eps = (self.need[i] - 1e-9).ceil().max(0.0) as u32;
            if eps <= EPS_MAX {
                return QuasiGeodesicParams { k, eps, within_grid: true };
            }
        }
        let eps = (self.need[K_STEPS - 1] - 1e-9).ceil().max(0.0) as u32;
        QuasiGeodesicParams { k: 8.0, eps, within_grid: false }
    }
}

/// Grid constants of a path parametrized by its vertex index.
pub fn quasigeodesic_params(g: &Graph, p: &Path) -> QuasiGeodesicParams {
    let v = p.vertices();
    let mut fit = QiFit::new();
    for s in 0..v.len() {
        let row = g.row(v[s]);
        for t in s + 1..v.len() {
            fit.add((t - s) as u32, row.get(v[t]));
        }
    }
    fit.params()
}

/// Hausdorff distance between a path and the canonical geodesic joining its ends.
pub fn stability_defect(g: &Graph, p: &Path) -> u32 {
    let geo = g.geodesic_unchecked(p.start(), p.end());
    super::hausdorff_distance(g, p.vertices(), geo.vertices()).expect("nonempty")
}
