//! Seeded sampling of base geodesics and lift pairs over them.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{qi_lift, FlareConfig, LiftPair, LiftSource};
use crate::error::{Error, Result};
use crate::sections::SectionFactory;

/// Endpoint pairs `(p, q)` with `d(p, q) = 2n`: all of them when there are at
/// most `cfg.geodesics`, otherwise a seeded sample.
fn endpoints(factory: &SectionFactory<'_>, cfg: &FlareConfig, rng: &mut ChaCha8Rng) -> Result<Vec<(u32, u32)>> {
    let base = factory.bundle().base();
    let len = 2 * cfg.window as u32;
    let mut all = Vec::new();
    for p in base.vertices() {
        let row = base.row(p);
        for q in p + 1..base.vertex_count() as u32 {
            if row.get(q) == len {
                all.push((p, q));
            }
        }
    }
    if all.is_empty() {
        return Err(Error::InstanceTooSmall(format!("no base geodesic of length {len}")));
    }
    if all.len() > cfg.geodesics {
        all.shuffle(rng);
        all.truncate(cfg.geodesics);
        all.sort_unstable();
    }
    Ok(all)
}

/// Lift pairs over sampled geodesics of length `2n`, centered at `γ(n)`.
/// Transit pairs start at two random points of the central fiber; section
/// pairs restrict barycenter-flow sections through two random vertices
/// (patched or fallback sections are skipped).
pub fn sample_lift_pairs(factory: &SectionFactory<'_>, cfg: &FlareConfig) -> Result<(usize, Vec<LiftPair>)> {
    let b = factory.bundle();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ends = endpoints(factory, cfg, &mut rng)?;
    let n = cfg.window;
    let total = b.total().vertex_count() as u32;
    let per_geodesic: Vec<Vec<LiftPair>> = ends
        .par_iter()
        .enumerate()
        .map(|(gi, &(p, q))| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (gi as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let gamma = b.base().geodesic_unchecked(p, q).0;
            let fiber = &b.fiber(gamma[n]).vertices;
            let forward = &gamma[n..];
            let backward: Vec<u32> = gamma[..=n].iter().rev().copied().collect();
            let transit = |x: u32| -> Vec<u32> {
                let mut down = b.transit_path(x, &backward);
                down.reverse();
                down.extend(&b.transit_path(x, forward)[1..]);
                down
            };
            let mut out = Vec::new();
            for i in 0..cfg.pairs {
                let use_sections = match (cfg.policy.transit, cfg.policy.sections) {
                    (true, true) => i % 2 == 1,
                    (false, true) => true,
                    (true, false) => false,
                    (false, false) => break,
                };
                if use_sections {
                    let (x, y) = (rng.gen_range(0..total), rng.gen_range(0..total));
                    let (s1, s2) = (factory.through(x), factory.through(y));
                    if [&s1, &s2].iter().any(|s| s.log().patched || s.log().fallback) {
                        continue;
                    }
                    let lp = LiftPair::new(b, gamma.clone(), n, qi_lift(&gamma, &s1), qi_lift(&gamma, &s2), LiftSource::Section);
                    out.push(lp.expect("sections project onto the base path"));
                } else {
                    if fiber.len() < 2 {
                        continue;
                    }
                    let x = fiber[rng.gen_range(0..fiber.len())];
                    let y = fiber[rng.gen_range(0..fiber.len())];
                    let lp = LiftPair::new(b, gamma.clone(), n, transit(x), transit(y), LiftSource::Transit);
                    out.push(lp.expect("transits project onto the base path"));
                }
            }
            out
        })
        .collect();
    Ok((ends.len(), per_geodesic.into_iter().flatten().collect()))
}
