//! Run configuration: the parsed command line plus analysis parameters.
//!
//! A `RunConfig` is echoed into every report, and `cbundle report` can
//! re-execute it.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use coarse_bundles::bundle::{ExtensionBase, PropernessPolicy};
use coarse_bundles::flaring::{FlareConfig, NecessityPolicy};
use coarse_bundles::graph::{generators, load_graph, Graph};
use coarse_bundles::hyperbolicity::{PairSample, SlimPolicy};
use coarse_bundles::ladders::HamenstadtConfig;
use coarse_bundles::sections::FlowConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub params: AnalysisParams,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// Generate a bundle and write it with its provenance.
    Generate(GenerateArgs),
    /// Load a bundle file and check the bundle axioms.
    Verify(BundleArg),
    /// Run one or all analyses on a bundle.
    Analyze(AnalyzeArgs),
    /// Build a section through a vertex and measure it.
    Section(SectionArgs),
    /// Build a ladder between two sections and measure its retraction.
    Ladder(LadderArgs),
    /// Estimate flaring of sampled lift pairs.
    Flare(FlareArgs),
    /// Dump a path family and run the Hamenstadt check on it.
    Paths(PathsArgs),
    /// Re-run the configuration embedded in a report.
    Report(ReportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Verify(_) => "verify",
            Command::Analyze(_) => "analyze",
            Command::Section(_) => "section",
            Command::Ladder(_) => "ladder",
            Command::Flare(_) => "flare",
            Command::Paths(_) => "paths",
            Command::Report(_) => "report",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BundleArg {
    /// Bundle file.
    pub bundle: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub instance: Instance,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "generator")]
pub enum Instance {
    /// Product of two graphs, e.g. `--base path:4 --fiber cycle:6`.
    Product {
        #[arg(long)]
        base: String,
        #[arg(long)]
        fiber: String,
    },
    /// Horocycle bundle of the hyperbolic plane.
    Horocycle {
        #[arg(long, default_value_t = 4.0)]
        radius: f64,
        #[arg(long, default_value_t = 16.0)]
        width: f64,
        #[arg(long, default_value_t = 1.0)]
        mesh: f64,
    },
    /// Free-group fibers over an interval or a box, e.g. `--base interval:5 --monodromy a->ab,b->a`.
    Extension {
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long)]
        base: String,
        #[arg(long)]
        monodromy: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    Hyperbolicity,
    Sections,
    Ladder,
    Flaring,
    Full,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct AnalyzeArgs {
    pub bundle: PathBuf,
    #[arg(long, value_enum, default_value_t = Which::Full)]
    pub which: Which,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectionMethod {
    Flow,
    Transit,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SectionArgs {
    pub bundle: PathBuf,
    /// Total-space vertex the section passes through.
    #[arg(long)]
    pub through: u32,
    #[arg(long, value_enum, default_value_t = SectionMethod::Flow)]
    pub method: SectionMethod,
    /// Second vertex; reports the level set of the two sections at `--a`.
    #[arg(long)]
    pub level_with: Option<u32>,
    #[arg(long, default_value_t = 2)]
    pub a: u32,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct LadderArgs {
    pub bundle: PathBuf,
    #[arg(long)]
    pub s1: u32,
    #[arg(long)]
    pub s2: u32,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct FlareArgs {
    pub bundle: PathBuf,
    /// Window radius n; overrides the config value.
    #[arg(long)]
    pub window: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Global,
    Canonical,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PathsArgs {
    pub bundle: PathBuf,
    /// Lines of `x y`; `#` starts a comment.
    #[arg(long)]
    pub pairs_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Family::Global)]
    pub family: Family,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReportArgs {
    /// A report written by an earlier run.
    pub report: PathBuf,
    /// Fail unless the re-run reproduces the report byte for byte.
    #[arg(long)]
    pub check: bool,
}

/// Module parameters, read from `--config` (JSON, or TOML by extension).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisParams {
    pub slim: SlimPolicy,
    pub properness: PropernessPolicy,
    pub flow: FlowConfig,
    pub quality_pairs: PairSample,
    pub flare: FlareConfig,
    pub necessity: NecessityPolicy,
    pub hamenstadt: HamenstadtConfig,
    /// Ladder neighborhood radius L.
    pub ladder_radius: u32,
    /// Decomposition threshold A; derived from `threshold` and `a0` when absent.
    pub a: Option<u32>,
    pub a0: u32,
    /// Girth threshold M for ladder flaring.
    pub threshold: u32,
    /// Sections sampled by `analyze`.
    pub sections: usize,
    /// Cocycle triples sampled on large bases.
    pub cocycle_samples: usize,
}

impl Default for AnalysisParams {
    fn default() -> Self {
        AnalysisParams {
            slim: SlimPolicy::default(),
            properness: PropernessPolicy::default(),
            flow: FlowConfig::default(),
            quality_pairs: PairSample::default(),
            flare: FlareConfig::default(),
            necessity: NecessityPolicy::default(),
            hamenstadt: HamenstadtConfig::default(),
            ladder_radius: 1,
            a: None,
            a0: 0,
            threshold: 2,
            sections: 8,
            cocycle_samples: 500,
        }
    }
}

impl AnalysisParams {
    pub fn load(path: &Path) -> Result<AnalysisParams> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let params = if path.extension().is_some_and(|e| e == "toml") {
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        } else {
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        };
        Ok(params)
    }

    /// Every module seed set to `seed`.
    pub fn with_seed(mut self, seed: u64) -> AnalysisParams {
        self.slim.seed = seed;
        self.properness.seed = seed;
        self.quality_pairs.seed = seed;
        self.flare.seed = seed;
        self.necessity.seed = seed;
        self.hamenstadt.seed = seed;
        self
    }
}

fn dims(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once('x').with_context(|| format!("expected AxB, got {s:?}"))?;
    Ok((a.parse()?, b.parse()?))
}

/// Graph from `path:N`, `cycle:N`, `grid:WxH`, `tree:AxD`, `star:N` or `file:PATH`.
pub fn parse_graph(spec: &str) -> Result<Graph> {
    let (kind, arg) = spec.split_once(':').with_context(|| format!("graph spec {spec:?} has no ':'"))?;
    let count = || arg.parse::<usize>().with_context(|| format!("bad size in {spec:?}"));
    let g = match kind {
        "path" => generators::path(count()?),
        "cycle" => generators::cycle(count()?),
        "star" => generators::star(count()?),
        "grid" => {
            let (w, h) = dims(arg)?;
            generators::grid(w, h)
        }
        "tree" => {
            let (a, d) = dims(arg)?;
            generators::tree(a, d)
        }
        "file" => {
            let f = std::fs::File::open(arg).with_context(|| format!("opening {arg}"))?;
            load_graph(std::io::BufReader::new(f))?
        }
        _ => bail!("unknown graph kind {kind:?}"),
    };
    Ok(g)
}

/// `interval:N` or `box:N`.
pub fn parse_base(spec: &str) -> Result<ExtensionBase> {
    let (kind, arg) = spec.split_once(':').with_context(|| format!("base spec {spec:?} has no ':'"))?;
    let n: usize = arg.parse().with_context(|| format!("bad size in {spec:?}"))?;
    match kind {
        "interval" => Ok(ExtensionBase::Interval(n)),
        "box" => Ok(ExtensionBase::Box(n)),
        _ => bail!("unknown base kind {kind:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_specs() {
        assert_eq!(parse_graph("path:4").unwrap().vertex_count(), 4);
        assert_eq!(parse_graph("grid:3x2").unwrap().vertex_count(), 6);
        assert_eq!(parse_graph("tree:2x2").unwrap().vertex_count(), 7);
        assert!(parse_graph("blob:3").is_err());
        assert!(parse_graph("path").is_err());
        assert_eq!(parse_base("box:3").unwrap(), ExtensionBase::Box(3));
    }

    #[test]
    fn params_round_trip_and_partial_files() {
        let p = AnalysisParams::default().with_seed(7);
        let back: AnalysisParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        let partial: AnalysisParams = toml::from_str("ladder_radius = 2\n[flare]\nwindow = 3\n").unwrap();
        assert_eq!((partial.ladder_radius, partial.flare.window, partial.flare.pairs), (2, 3, 50));
    }
}
