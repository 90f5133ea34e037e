//! Exponential divergence of lifts once they are a threshold apart.

use serde::{Deserialize, Serialize};

use super::LiftPair;
use crate::bundle::MetricGraphBundle;

/// Least-squares fit `d(T + t) ≈ A b^t` on the indices past the crossing `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceFit {
    /// Threshold that was crossed.
    pub c: u32,
    /// Signed offset of the crossing from the center.
    pub crossing: isize,
    pub a: f64,
    pub b: f64,
    pub points: usize,
    /// Distances never decrease past the crossing.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub forward: Option<DivergenceFit>,
    pub backward: Option<DivergenceFit>,
}

impl DivergenceReport {
    pub fn diverges(&self) -> bool {
        self.forward.is_some() || self.backward.is_some()
    }

    /// The fit with the larger base.
    pub fn best(&self) -> Option<&DivergenceFit> {
        [&self.forward, &self.backward].into_iter().flatten().max_by(|x, y| x.b.total_cmp(&y.b))
    }
}

fn fit(ys: &[f64]) -> (f64, f64) {
    let n = ys.len() as f64;
    let mx = (n - 1.0) / 2.0;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = ys.iter().enumerate().map(|(i, y)| (i as f64 - mx) * (y - my)).sum();
    let sxx: f64 = (0..ys.len()).map(|i| (i as f64 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    ((my - slope * mx).exp(), slope.exp())
}

fn one_direction(b: &MetricGraphBundle, lp: &LiftPair, c_grid: &[u32], sign: isize) -> Option<DivergenceFit> {
    let len = lp.distances.len() as isize;
    let steps = if sign > 0 { len - 1 - lp.center as isize } else { lp.center as isize };
    // Stop before the first index whose lift points were truncated.
    let clean = |t: isize| {
        let i = (lp.center as isize + sign * t) as usize;
        !b.is_boundary(lp.lift1[i]) && !b.is_boundary(lp.lift2[i])
    };
    let usable = (0..=steps).take_while(|&t| clean(t)).count() as isize;
    let d0 = lp.distances[lp.center];
    let c = *c_grid.iter().filter(|&&c| c > d0).min()?;
    let crossing = (0..usable).find(|&t| lp.d(sign * t) >= c)?;
    let ds: Vec<u32> = (crossing..usable).map(|t| lp.d(sign * t)).collect();
    if ds.len() < 2 {
        return None;
    }
    let logs: Vec<f64> = ds.iter().map(|&d| (d as f64).ln()).collect();
    let (a, base) = fit(&logs);
    Some(DivergenceFit {
        c,
        crossing: sign * crossing,
        a,
        b: base,
        points: ds.len(),
        monotone: ds.windows(2).all(|w| w[0] <= w[1]),
    })
}

/// For each direction from the center: the smallest grid value `C > d(0)`
/// reached at some index `T`, and a fit of `log d` beyond `T`.
pub fn divergence_test(b: &MetricGraphBundle, lp: &LiftPair, c_grid: &[u32]) -> DivergenceReport {
    DivergenceReport { forward: one_direction(b, lp, c_grid, 1), backward: one_direction(b, lp, c_grid, -1) }
}
