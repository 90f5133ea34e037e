mod common;

use coarse_bundles::bundle::{
    generate_extension_bundle, generate_horocycle_bundle, generate_product_bundle, ExtensionBase, ExtensionSpec,
    HorocycleSpec, MetricGraphBundle,
};
use coarse_bundles::graph::generators::{cycle, path, tree};
use coarse_bundles::hyperbolicity::PairSample;
use coarse_bundles::sections::{
    barycenter_flow_section, barycenter_surjectivity_report, far_triple, level_set, level_set_report,
    measure_section_quality, read_section, write_section, FlowConfig, Section, SectionFactory,
};
use common::all_pairs;
use proptest::prelude::*;

fn instances() -> Vec<(&'static str, MetricGraphBundle)> {
    let fib = ExtensionSpec { radius: 3, base: ExtensionBase::Interval(5), monodromy: vec!["a->ab,b->a".into()] };
    vec![
        ("product", generate_product_bundle(&cycle(5), &tree(2, 3)).unwrap()),
        ("horocycle", generate_horocycle_bundle(&HorocycleSpec { radius: 3.0, width: 16.0, mesh: 1.0 }).unwrap()),
        ("fibonacci", generate_extension_bundle(&fib).unwrap()),
    ]
}

#[test]
fn flow_sections_are_sections_through_their_point() {
    for (name, b) in instances() {
        let f = SectionFactory::new(&b, FlowConfig::default());
        for x in b.total().vertices().step_by(7) {
            let s = f.through(x);
            assert_eq!(s.at(b.proj(x)), x, "{name}: value at x");
            for w in b.base().vertices() {
                assert_eq!(b.proj(s.at(w)), w, "{name}: proj∘s at {w}");
            }
            assert!(!s.log().fallback, "{name}: fallback through {x}");
        }
    }
}

/// Max-min separated triple by brute force over all triples of the fiber.
fn brute_far_triple(d: &[Vec<u32>], members: &[u32]) -> (u32, [u32; 3]) {
    let m = members.len();
    let mut best = (0, [0; 3]);
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let s = d[a][b].min(d[a][c]).min(d[b][c]);
                if s > best.0 {
                    best = (s, [members[a], members[b], members[c]]);
                }
            }
        }
    }
    best
}

#[test]
fn far_triples_match_brute_force() {
    for fiber in [tree(2, 3), cycle(9), path(12), tree(3, 2)] {
        let b = generate_product_bundle(&path(1), &fiber).unwrap();
        let d = all_pairs(&fiber);
        let members: Vec<u32> = fiber.vertices().collect();
        let (sep, triple) = brute_far_triple(&d, &members);
        let t = far_triple(&b, 0, None).unwrap();
        assert_eq!(t.separation, sep);
        assert_eq!(t.vertices, triple);
    }
}

#[test]
fn quality_fit_is_valid_against_bfs() {
    let b = generate_horocycle_bundle(&HorocycleSpec { radius: 4.0, width: 16.0, mesh: 1.0 }).unwrap();
    let d = all_pairs(b.total());
    let db = all_pairs(b.base());
    let f = SectionFactory::new(&b, FlowConfig::default());
    for x in [3u32, 40, 77, 150] {
        let s = f.through(x);
        let q = measure_section_quality(&b, &s, &PairSample::default());
        assert!(q.exhaustive);
        assert_eq!(q.lower_bound_violations, 0);
        let mut hop = 0;
        for (w, z) in b.base().edges() {
            hop = hop.max(d[s.at(w) as usize][s.at(z) as usize]);
        }
        assert_eq!(q.max_hop, hop);
        let (k, eps) = (q.k, q.eps as f64);
        for w in b.base().vertices() {
            for z in b.base().vertices() {
                let (bd, td) = (db[w as usize][z as usize] as f64, d[s.at(w) as usize][s.at(z) as usize] as f64);
                assert!(bd / k - eps <= td + 1e-9 && td <= k * bd + eps + 1e-9, "{x}: {w},{z}");
            }
        }
    }
}

#[test]
fn section_quality_is_stable_in_scale() {
    let mut ks = Vec::new();
    for t in [4.0, 6.0] {
        let b = generate_horocycle_bundle(&HorocycleSpec { radius: t, ..HorocycleSpec::default() }).unwrap();
        let f = SectionFactory::new(&b, FlowConfig::default());
        let n = b.total().vertex_count() as u32;
        let k = (0..20u32)
            .map(|i| measure_section_quality(&b, &f.through(i * 7919 % n), &PairSample::default()).uniform())
            .fold(0.0, f64::max);
        ks.push(k);
    }
    assert!(ks[1] <= 2.0 * ks[0] && ks[0] <= 2.0 * ks[1], "{ks:?}");
}

#[test]
fn product_flow_sections_are_constant() {
    let b = generate_product_bundle(&cycle(6), &path(9)).unwrap();
    let s = barycenter_flow_section(&b, 6 * 0 + 4, FlowConfig::default()).unwrap();
    assert_eq!(s.values(), &[4, 13, 22, 31, 40, 49]);
    let q = measure_section_quality(&b, &s, &PairSample::default());
    assert_eq!((q.k, q.eps), (1.0, 0));
}

#[test]
fn section_files_round_trip() {
    let (_, b) = instances().remove(2);
    let s = barycenter_flow_section(&b, 10, FlowConfig::default()).unwrap();
    let mut buf = Vec::new();
    write_section(&s, &mut buf).unwrap();
    assert_eq!(read_section(&b, buf.as_slice()).unwrap().values(), s.values());
}

#[test]
fn barycenters_cover_tree_fibers() {
    let b = generate_product_bundle(&path(2), &tree(2, 4)).unwrap();
    let report = barycenter_surjectivity_report(&b, &[0, 1], FlowConfig::default());
    assert_eq!(report.len(), 2);
    for r in report {
        assert_eq!(r.fiber_size, 31);
        assert!(r.covering_radius.unwrap() <= r.fiber_diameter);
    }
}

/// Two flow lines `d` apart at `t = 0` are `d e^{-t}` apart at height `t`.
#[test]
fn horocycle_level_sets_follow_the_closed_form() {
    let spec = HorocycleSpec { radius: 4.0, width: 16.0, mesh: 1.0 };
    let b = generate_horocycle_bundle(&spec).unwrap();
    let m = spec.fiber_points();
    let mid = spec.levels() / 2;
    let x = (mid * m + spec.nearest(-4.0)) as u32;
    let y = (mid * m + spec.nearest(4.0)) as u32;
    let (s1, s2) = (Section::transit(&b, x).unwrap(), Section::transit(&b, y).unwrap());
    let set = level_set(&b, &s1, &s2, 4);
    // 8 e^{-t} <= 4 for t >= ln 2; within one mesh step of that.
    let lowest = spec.t(*set.iter().min().unwrap() as usize);
    assert!((lowest - 2f64.ln()).abs() <= spec.mesh, "{set:?}");
    let r = level_set_report(&b, &s1, &s2, 4);
    assert_eq!(r.quasiconvexity, Some(0));
    assert_eq!(r.diameter, Some(set.len() as u32 - 1));
    assert!(r.outside.windows(2).all(|w| w[0].fiber_distance >= w[1].fiber_distance));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transit_and_flow_sections_project_to_identity(n in 2usize..6, depth in 1usize..4, seed in 0u32..1000) {
        let b = generate_product_bundle(&path(n), &tree(2, depth)).unwrap();
        let x = seed % b.total().vertex_count() as u32;
        for s in [Section::transit(&b, x).unwrap(), barycenter_flow_section(&b, x, FlowConfig::default()).unwrap()] {
            prop_assert_eq!(s.at(b.proj(x)), x);
            for w in b.base().vertices() {
                prop_assert_eq!(b.proj(s.at(w)), w);
            }
        }
    }
}
