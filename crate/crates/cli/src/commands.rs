use std::fmt::Write as _;
use std::io::BufReader;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use coarse_bundles::bundle::{
    check_cocycle, generate_extension_bundle, generate_horocycle_bundle, generate_product_bundle, measure_properness,
    read_bundle, write_bundle, ExtensionSpec, HorocycleSpec, MetricGraphBundle,
};
use coarse_bundles::flaring::{
    bounded_flaring_profile, flare_test, ladder_flare_check, necessity_report, sample_lift_pairs, LadderFlareConfig,
    LiftPair,
};
use coarse_bundles::graph::Graph;
use coarse_bundles::hyperbolicity::{delta_four_point, delta_four_point_sampled, hyperbolicity_report, SlimMode};
use coarse_bundles::ladders::{
    build_ladder, decompose_ladder, default_threshold, hamenstadt_check, retraction, retraction_lipschitz,
    CanonicalGeodesics, GlobalPaths, PathFamily,
};
use coarse_bundles::sections::{
    far_triple, level_set_report, measure_section_quality, write_section, Section, SectionFactory,
};
use coarse_bundles::Error;

use crate::config::{
    parse_base, parse_graph, AnalysisParams, Command, Family, Instance, RunConfig, SectionMethod, Which,
};
use crate::report::{Checks, Report, VERSION};

/// A finished run: its report and the files it produced.
pub struct Outcome {
    pub report: Report,
    pub artifacts: Vec<(String, Vec<u8>)>,
}

struct Run {
    result: Value,
    checks: Checks,
    artifacts: Vec<(String, Vec<u8>)>,
}

impl Run {
    fn new(result: Value, checks: Checks) -> Run {
        Run { result, checks, artifacts: Vec::new() }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    log::info!("running {}", cfg.command.name());
    let p = &cfg.params;
    let run = match &cfg.command {
        Command::Generate(args) => generate(&args.instance)?,
        Command::Verify(args) => verify(&args.bundle)?,
        Command::Analyze(args) => analyze(&load_bundle(&args.bundle)?, args.which, p)?,
        Command::Section(args) => {
            let b = load_bundle(&args.bundle)?;
            section(&b, args.through, args.method, args.level_with, args.a, p)?
        }
        Command::Ladder(args) => {
            let b = load_bundle(&args.bundle)?;
            let mut checks = Checks::default();
            let result = ladder(&b, args.s1, args.s2, p, &mut checks)?;
            Run::new(result, checks)
        }
        Command::Flare(args) => {
            let b = load_bundle(&args.bundle)?;
            let mut p = p.clone();
            if let Some(n) = args.window {
                p.flare.window = n;
            }
            flare(&b, &p)?
        }
        Command::Paths(args) => paths(&load_bundle(&args.bundle)?, args.pairs_file.as_deref(), args.family, p)?,
        Command::Report(args) => rerun(&args.report, args.check)?,
    };
    Ok(Outcome {
        report: Report { version: VERSION.to_string(), config: cfg.clone(), invariants: run.checks.0, result: run.result },
        artifacts: run.artifacts,
    })
}

fn load_bundle(path: &Path) -> Result<MetricGraphBundle> {
    let f = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_bundle(BufReader::new(f)).with_context(|| format!("loading bundle {}", path.display()))
}

fn bundle_bytes(b: &MetricGraphBundle) -> Vec<u8> {
    let mut out = Vec::new();
    write_bundle(b, &mut out).expect("writing to memory");
    out
}

fn generate(instance: &Instance) -> Result<Run> {
    let b = match instance {
        Instance::Product { base, fiber } => generate_product_bundle(&parse_graph(base)?, &parse_graph(fiber)?)?,
        Instance::Horocycle { radius, width, mesh } => {
            generate_horocycle_bundle(&HorocycleSpec { radius: *radius, width: *width, mesh: *mesh })?
        }
        Instance::Extension { radius, base, monodromy } => generate_extension_bundle(&ExtensionSpec {
            radius: *radius,
            base: parse_base(base)?,
            monodromy: monodromy.clone(),
        })?,
    };
    log::info!("generated {} vertices over {} base vertices", b.total().vertex_count(), b.base().vertex_count());
    let bytes = bundle_bytes(&b);
    let mut checks = Checks::default();
    let reloaded = read_bundle(&bytes[..]);
    let same = reloaded.as_ref().is_ok_and(|r| r.summary() == b.summary() && bundle_bytes(r) == bytes);
    checks.check("reload-verifies", same, || format!("{:?}", reloaded.err()));
    let provenance = serde_json::to_vec_pretty(b.provenance())?;
    let mut run = Run::new(json!({ "summary": b.summary(), "provenance": b.provenance() }), checks);
    run.artifacts.push(("bundle.txt".into(), bytes));
    run.artifacts.push(("provenance.json".into(), provenance));
    Ok(run)
}

fn verify(path: &Path) -> Result<Run> {
    let text = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let mut checks = Checks::default();
    let result = match read_bundle(&text[..]) {
        Ok(b) => {
            checks.check("bundle-axioms", true, String::new);
            json!({ "summary": b.summary(), "provenance": b.provenance() })
        }
        Err(e) => {
            checks.check("bundle-axioms", false, || e.to_string());
            json!({ "error": e.to_string() })
        }
    };
    Ok(Run::new(result, checks))
}

fn analyze(b: &MetricGraphBundle, which: Which, p: &AnalysisParams) -> Result<Run> {
    let mut checks = Checks::default();
    let mut result = serde_json::Map::new();
    let all = which == Which::Full;
    result.insert("summary".into(), json!(b.summary()));
    if all || which == Which::Hyperbolicity {
        result.insert("hyperbolicity".into(), hyperbolicity(b, p, &mut checks));
    }
    if all || which == Which::Sections {
        result.insert("sections".into(), sections(b, p, &mut checks));
    }
    if all || which == Which::Ladder {
        let value = match far_triple(b, 0, None) {
            Some(t) => ladder(b, t.vertices[0], t.vertices[1], p, &mut checks)?,
            None => json!({ "skipped": "the first fiber has no separated triple" }),
        };
        result.insert("ladder".into(), value);
    }
    let mut artifacts = Vec::new();
    if all || which == Which::Flaring {
        let run = flare(b, p)?;
        checks.0.extend(run.checks.0);
        artifacts = run.artifacts;
        result.insert("flaring".into(), run.result);
    }
    Ok(Run { result: Value::Object(result), checks, artifacts })
}

fn lemma_checks(name: &str, g: &Graph, p: &AnalysisParams, checks: &mut Checks) -> Value {
    log::info!("hyperbolicity of the {name} graph ({} vertices)", g.vertex_count());
    let r = hyperbolicity_report(g, &p.slim);
    // The bounds hold for every geodesic triangle, so they are only asserted
    // when every geodesic was enumerated.
    if r.mode == SlimMode::AllGeodesics {
        checks.check(&format!("{name}-insize-4delta"), r.insize_max <= r.delta_slim * 4, || {
            format!("insize {} > 4 * {}", r.insize_max, r.delta_slim)
        });
        checks.check(&format!("{name}-thin-6delta"), r.thin_max <= r.delta_slim * 6, || {
            format!("thinness {} > 6 * {}", r.thin_max, r.delta_slim)
        });
    }
    json!(r)
}

fn hyperbolicity(b: &MetricGraphBundle, p: &AnalysisParams, checks: &mut Checks) -> Value {
    let total = lemma_checks("total", b.total(), p, checks);
    let base = lemma_checks("base", b.base(), p, checks);
    let fibers: Vec<f64> = b
        .fibers()
        .iter()
        .map(|f| {
            if f.graph.vertex_count() <= p.necessity.exact_max {
                delta_four_point(&f.graph).map(|d| d.as_f64()).unwrap_or(f64::NAN)
            } else {
                delta_four_point_sampled(&f.graph, p.necessity.samples, p.necessity.seed).as_f64()
            }
        })
        .collect();
    let max = fibers.iter().copied().fold(0.0, f64::max);
    json!({ "total": total, "base": base, "fiber_delta_4pt": fibers, "fiber_delta_4pt_max": max })
}

fn check_section(b: &MetricGraphBundle, s: &Section, x: u32, checks: &mut Checks) {
    let ok = s.at(b.proj(x)) == x && b.base().vertices().all(|w| b.proj(s.at(w)) == w);
    checks.check(&format!("section-{x}-proj-s-id"), ok, || format!("section through {x} is not a section"));
}

fn section_entry(b: &MetricGraphBundle, s: &Section, x: u32, p: &AnalysisParams, checks: &mut Checks) -> Value {
    check_section(b, s, x, checks);
    let q = measure_section_quality(b, s, &p.quality_pairs);
    checks.check(&format!("section-{x}-lower-bound"), q.lower_bound_violations == 0, || {
        format!("{} pairs closer than their base distance", q.lower_bound_violations)
    });
    json!({ "through": x, "kind": s.kind(), "log": s.log(), "quality": q, "uniform_k": q.uniform() })
}

fn sections(b: &MetricGraphBundle, p: &AnalysisParams, checks: &mut Checks) -> Value {
    log::info!("properness and cocycle");
    let profile = measure_properness(b, &p.properness);
    let cocycle = check_cocycle(b, &profile, p.cocycle_samples, p.properness.seed);
    checks.check("cocycle-bound", cocycle.violations.is_empty(), || format!("{:?}", cocycle.violations.first()));
    let f = SectionFactory::new(b, p.flow);
    let n = b.total().vertex_count() as u64;
    let count = p.sections.min(n as usize).max(1) as u64;
    let picks: Vec<u32> = (0..count).map(|i| ((p.quality_pairs.seed + i * n / count) % n) as u32).collect();
    log::info!("measuring {} flow sections", picks.len());
    let entries: Vec<Value> = picks.iter().map(|&x| section_entry(b, &f.through(x), x, p, checks)).collect();
    json!({
        "properness": { "table": profile.table, "exact": profile.exact, "K": profile.k() },
        "cocycle": cocycle,
        "sections": entries,
    })
}

fn section(
    b: &MetricGraphBundle,
    x: u32,
    method: SectionMethod,
    other: Option<u32>,
    a: u32,
    p: &AnalysisParams,
) -> Result<Run> {
    let n = b.total().vertex_count() as u32;
    for v in std::iter::once(x).chain(other) {
        if v >= n {
            bail!("vertex {v} is outside 0..{n}");
        }
    }
    let f = SectionFactory::new(b, p.flow);
    let build = |v: u32| -> Result<Section> {
        Ok(match method {
            SectionMethod::Flow => (*f.through(v)).clone(),
            SectionMethod::Transit => Section::transit(b, v)?,
        })
    };
    let s = build(x)?;
    let mut checks = Checks::default();
    let mut result = section_entry(b, &s, x, p, &mut checks);
    if let Some(y) = other {
        let t = build(y)?;
        check_section(b, &t, y, &mut checks);
        result["level_set"] = json!(level_set_report(b, &s, &t, a));
    }
    let mut file = Vec::new();
    write_section(&s, &mut file)?;
    let mut run = Run::new(result, checks);
    run.artifacts.push(("section.txt".into(), file));
    Ok(run)
}

fn ladder(b: &MetricGraphBundle, x: u32, y: u32, p: &AnalysisParams, checks: &mut Checks) -> Result<Value> {
    let n = b.total().vertex_count() as u32;
    if x >= n || y >= n {
        bail!("ladder sections must pass through vertices in 0..{n}");
    }
    let f = SectionFactory::new(b, p.flow);
    let (s1, s2) = (f.through(x), f.through(y));
    check_section(b, &s1, x, checks);
    check_section(b, &s2, y, checks);
    let l = build_ladder(b, &s1, &s2, p.ladder_radius)?;
    log::info!("ladder with {} vertices, girth {}", l.vertices().len(), l.girth());
    let idempotent = l.vertices().iter().all(|&v| retraction(b, &l, v).is_ok_and(|r| r == v));
    checks.check("retraction-idempotent", idempotent, || "a ladder point moved under the retraction".into());
    let lip = retraction_lipschitz(b, &l);
    let a = p.a.unwrap_or_else(|| default_threshold(p.threshold, p.a0));
    let rec = decompose_ladder(b, &l, a, &f, None);
    checks.check("decomposition-monotone", rec.monotonicity.within_slack, || format!("{:?}", rec.monotonicity));
    let cfg = LadderFlareConfig { window: p.flare.window, threshold: p.threshold, a, center: None };
    let flare = match ladder_flare_check(b, &l, &f, &cfg) {
        Ok(r) => json!(r),
        Err(Error::InstanceTooSmall(msg)) => json!({ "vacuous": msg }),
        Err(e) => return Err(e.into()),
    };
    Ok(json!({
        "through": [x, y],
        "summary": l.summary(),
        "lipschitz": lip,
        "decomposition": {
            "a": rec.a,
            "anchor": rec.anchor,
            "footpoints": rec.footpoints,
            "girths": rec.girths,
            "intermediates": rec.intermediates,
            "monotonicity": rec.monotonicity,
        },
        "flaring": flare,
    }))
}

fn distances_csv(samples: &[LiftPair]) -> Vec<u8> {
    let mut out = String::from("sample,source,hop,offset,base,distance\n");
    for (i, lp) in samples.iter().enumerate() {
        let source = serde_json::to_value(lp.source).expect("enum serializes");
        for (j, (&w, &d)) in lp.gamma.iter().zip(&lp.distances).enumerate() {
            let offset = j as isize - lp.center as isize;
            writeln!(out, "{i},{},{},{offset},{w},{d}", source.as_str().unwrap_or(""), lp.hop).unwrap();
        }
    }
    out.into_bytes()
}

fn flare(b: &MetricGraphBundle, p: &AnalysisParams) -> Result<Run> {
    let f = SectionFactory::new(b, p.flow);
    let mut checks = Checks::default();
    log::info!("sampling lift pairs over windows of radius {}", p.flare.window);
    let (report, samples) = match (flare_test(&f, &p.flare), sample_lift_pairs(&f, &p.flare)) {
        (Ok(r), Ok((_, s))) => (json!(r), s),
        (Err(Error::InstanceTooSmall(msg)), _) => (json!({ "vacuous": msg }), Vec::new()),
        (Err(e), _) | (_, Err(e)) => return Err(e.into()),
    };
    let profile = measure_properness(b, &p.properness);
    let bounded = bounded_flaring_profile(&profile, &samples);
    checks.check("bounded-flaring", bounded.iter().all(|r| r.dominated()), || {
        format!("{:?}", bounded.iter().find(|r| !r.dominated()).map(|r| &r.violations))
    });
    log::info!("necessity report");
    let necessity = necessity_report(&f, &p.flare, &p.necessity);
    let mut run = Run::new(json!({ "report": report, "bounded": bounded, "necessity": necessity }), checks);
    run.artifacts.push(("distances.csv".into(), distances_csv(&samples)));
    Ok(run)
}

fn read_pairs(path: &Path, n: u32) -> Result<Vec<(u32, u32)>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<&str> = line.split_whitespace().collect();
        let [x, y] = nums[..] else {
            bail!("line {}: expected two vertex ids", i + 1);
        };
        let (x, y): (u32, u32) = (x.parse()?, y.parse()?);
        if x >= n || y >= n {
            bail!("line {}: pair ({x}, {y}) is outside the vertex range 0..{n}", i + 1);
        }
        pairs.push((x, y));
    }
    Ok(pairs)
}

fn paths(b: &MetricGraphBundle, pairs_file: Option<&Path>, family: Family, p: &AnalysisParams) -> Result<Run> {
    let n = b.total().vertex_count() as u32;
    let pairs = match pairs_file {
        Some(path) => read_pairs(path, n)?,
        None => Vec::new(),
    };
    let global;
    let canonical;
    let pf: &dyn PathFamily = match family {
        Family::Global => {
            global = GlobalPaths::new(SectionFactory::new(b, p.flow), p.ladder_radius);
            &global
        }
        Family::Canonical => {
            canonical = CanonicalGeodesics { graph: b.total() };
            &canonical
        }
    };
    let mut checks = Checks::default();
    let mut dump = Vec::new();
    let mut connected = true;
    for &(x, y) in &pairs {
        let path = pf.path(x, y);
        connected &= path.path.first() == Some(&x)
            && path.path.last() == Some(&y)
            && path.path.windows(2).all(|e| b.total().has_edge(e[0], e[1]));
        serde_json::to_writer(&mut dump, &*path)?;
        dump.push(b'\n');
    }
    checks.check("paths-join-endpoints", connected, || "a dumped path is not an edge path between its pair".into());
    log::info!("Hamenstadt check on {} paths", pf.kind_name());
    let ham = hamenstadt_check(pf, &p.hamenstadt);
    let mut run = Run::new(json!({ "family": pf.kind(), "pairs": pairs.len(), "hamenstadt": ham }), checks);
    run.artifacts.push(("paths.jsonl".into(), dump));
    Ok(run)
}

trait KindName {
    fn kind_name(&self) -> String;
}

impl<T: PathFamily + ?Sized> KindName for T {
    fn kind_name(&self) -> String {
        serde_json::to_value(self.kind()).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
    }
}

fn rerun(path: &Path, check: bool) -> Result<Run> {
    let text = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let previous: Report = serde_json::from_slice(&text).with_context(|| format!("parsing report {}", path.display()))?;
    if matches!(previous.config.command, Command::Report(_)) {
        bail!("{} is itself a re-run report", path.display());
    }
    let again = execute(&previous.config)?;
    let reproduced = again.report.to_bytes() == text;
    let mut checks = Checks::default();
    if check {
        checks.check("byte-identical", reproduced, || format!("re-running {} changed its report", path.display()));
    }
    checks.0.extend(again.report.invariants.iter().cloned());
    Ok(Run::new(
        json!({ "source": path, "command": previous.config.command.name(), "reproduced": reproduced, "version": previous.version }),
        checks,
    ))
}
