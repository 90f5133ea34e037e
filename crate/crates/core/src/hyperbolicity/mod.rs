//! Hyperbolicity diagnostics on finite graphs.
//!
//! Distances involving edge midpoints are half-integers, so slimness,
//! insize, thinness and Gromov products are reported as [`Half`] values.

mod four_point;
mod points;
mod projection;
mod quasi;
mod slim;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Graph;
use crate::half::Half;

pub use four_point::{delta_four_point, delta_four_point_sampled, quadruple2, FOUR_POINT_CAP};
pub use points::MetricPoint;
pub use projection::{
    coboundedness, hausdorff_distance, nearest_point_projection, project_set, quasiconvexity_constant,
    two_step_projection_defect, PairSample, ProjectionWitness,
};
pub use quasi::{k_grid, quasigeodesic_params, stability_defect, QiFit, QuasiGeodesicParams};
pub use slim::{
    barycenter, delta_slim, internal_points, side_distances, triangle_stats, Sides, SlimMode, SlimPolicy,
    SlimReport, TriangleStats, TriangleWitness, WitnessKind,
};

/// `(y.z)_x = ½ (d(x,y) + d(x,z) - d(y,z))`.
pub fn gromov_product(g: &Graph, y: u32, z: u32, x: u32) -> Result<Half> {
    for v in [x, y, z] {
        g.check_vertex(v)?;
    }
    let twice = g.dist(x, y) + g.dist(x, z) - g.dist(y, z);
    Ok(Half::from_twice(twice as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FourPointMode {
    Exact,
    Sampled,
}

/// Combined slim and four-point report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityReport {
    pub delta_slim: Half,
    pub delta_4pt: Half,
    pub insize_max: Half,
    pub thin_max: Half,
    pub witnesses: Vec<TriangleWitness>,
    pub mode: SlimMode,
    pub four_point_mode: FourPointMode,
    pub triangles: usize,
    pub seed: u64,
}

/// Runs both hyperbolicity measures. Above [`FOUR_POINT_CAP`] vertices the
/// four-point value comes from `policy.samples * 10` random quadruples.
pub fn hyperbolicity_report(g: &Graph, policy: &SlimPolicy) -> HyperbolicityReport {
    let slim = delta_slim(g, policy);
    let (delta_4pt, four_point_mode) = match delta_four_point(g) {
        Ok(v) => (v, FourPointMode::Exact),
        Err(_) => (delta_four_point_sampled(g, policy.samples * 10, policy.seed), FourPointMode::Sampled),
    };
    HyperbolicityReport {
        delta_slim: slim.delta_slim,
        delta_4pt,
        insize_max: slim.insize_max,
        thin_max: slim.thin_max,
        witnesses: slim.witnesses,
        mode: slim.mode,
        four_point_mode,
        triangles: slim.triangles,
        seed: slim.seed,
    }
}
