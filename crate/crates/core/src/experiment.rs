//! Configured, reproducible experiment runs and their output files.

use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::backbone::{build_backbone_clustering, path_net, BackboneParams, Profile};
use crate::error::{Error, Result};
use crate::graph::generate::{generate, GeneratorSpec};
use crate::graph::io::{read_dimacs, read_edge_list};
use crate::graph::WeightedGraph;
use crate::ldc::LdcParams;
use crate::ldd::{measure_cut_rates, DriverConfig, MeasureOptions};
use crate::oracle::{Backend, OracleCounters, SsspOracle};
use crate::sampling::Stream;
use crate::scalar::log2_at_least_one;
use crate::separator::{sample_weak_separator, SeparatorParams};
use crate::verify::{audit_clustering, weighted_diameter, wilson_interval, AuditReport, RunStats};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum GraphSource {
    /// Edge list, or DIMACS when the extension is `.gr` or `.dimacs`.
    File { path: PathBuf },
    Generated {
        generator: GeneratorSpec,
        nodes: usize,
        seed: u64,
    },
}

impl GraphSource {
    pub fn load(&self) -> Result<WeightedGraph<f64>> {
        match self {
            GraphSource::File { path } => {
                let reader = BufReader::new(File::open(path)?);
                match path.extension().and_then(|e| e.to_str()) {
                    Some("gr") | Some("dimacs") => read_dimacs(reader),
                    _ => read_edge_list(reader),
                }
            }
            GraphSource::Generated { generator, nodes, seed } => generate(generator, *nodes, *seed),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Ldd,
    Ldc,
    Separator,
    Backbone,
    KpathLdd,
    Validate,
    Bench,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ldd => "ldd",
            Algorithm::Ldc => "ldc",
            Algorithm::Separator => "separator",
            Algorithm::Backbone => "backbone",
            Algorithm::KpathLdd => "kpath-ldd",
            Algorithm::Validate => "validate",
            Algorithm::Bench => "bench",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiameterKeyword {
    Auto,
}

/// A fixed diameter, or `auto` for the exact weighted diameter of the graph.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DiameterSpec {
    Value(f64),
    Keyword(DiameterKeyword),
}

impl DiameterSpec {
    pub const AUTO: DiameterSpec = DiameterSpec::Keyword(DiameterKeyword::Auto);
}

impl FromStr for DiameterSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(DiameterSpec::AUTO);
        }
        s.parse::<f64>()
            .map(DiameterSpec::Value)
            .map_err(|_| format!("expected a number or `auto`, got `{s}`"))
    }
}

impl fmt::Display for DiameterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiameterSpec::Value(v) => write!(f, "{v}"),
            DiameterSpec::Keyword(DiameterKeyword::Auto) => f.write_str("auto"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    /// Structured result (clustering, separator or audit report) as JSON.
    pub result: Option<PathBuf>,
    /// Tabular statistics as CSV.
    pub stats: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub graph: GraphSource,
    pub algorithm: Algorithm,
    pub diameter: DiameterSpec,
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Declared path-separability; defaults to `⌈log₂ n⌉` where needed.
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub profile: Profile,
    pub trials: usize,
    pub seed: u64,
    /// Worker threads for independent trials; does not affect results.
    #[serde(default, skip_serializing)]
    pub jobs: Option<usize>,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    #[serde(default)]
    pub outputs: OutputPaths,
}

fn default_backend() -> Backend {
    Backend::Exact
}

impl ExperimentConfig {
    pub fn new(graph: GraphSource, algorithm: Algorithm, diameter: DiameterSpec) -> Self {
        Self {
            graph,
            algorithm,
            diameter,
            epsilon: None,
            k: None,
            profile: Profile::Desk,
            trials: 1,
            seed: 0,
            jobs: None,
            backend: Backend::Exact,
            outputs: OutputPaths::default(),
        }
    }

    /// Copy with relative output paths placed under `dir`.
    pub fn with_output_dir(&self, dir: &Path) -> Self {
        let place = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|p| if p.is_relative() { dir.join(p) } else { p.clone() })
        };
        let mut c = self.clone();
        c.outputs = OutputPaths {
            result: place(&self.outputs.result),
            stats: place(&self.outputs.stats),
            manifest: place(&self.outputs.manifest),
        };
        c
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials", "must be at least 1"));
        }
        if let DiameterSpec::Value(d) = self.diameter {
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::param("diameter", "must be positive and finite"));
            }
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0) || !e.is_finite() {
                return Err(Error::param("epsilon", "must be positive"));
            }
        }
        if self.algorithm == Algorithm::Separator && self.epsilon.is_none() {
            return Err(Error::param("epsilon", "required by the separator"));
        }
        if self.k == Some(0) {
            return Err(Error::param("k", "must be at least 1"));
        }
        if self.jobs == Some(0) {
            return Err(Error::param("jobs", "must be at least 1"));
        }
        Ok(())
    }
}

/// Values fixed at run time from the graph and the configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub node_count: usize,
    pub edge_count: usize,
    pub diameter: f64,
    pub k: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: ExperimentConfig,
    pub resolved: Resolved,
    pub counters: OracleCounters,
    pub summary: serde_json::Value,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub manifest: Manifest,
    pub result: serde_json::Value,
    pub audit: Option<AuditReport>,
}

fn resolve_k(config: &ExperimentConfig, n: usize) -> usize {
    config.k.unwrap_or_else(|| {
        let k = log2_at_least_one(n as f64).ceil() as usize;
        log::warn!("no path-separability declared; assuming k = {k}");
        k
    })
}

fn ldc_params(config: &ExperimentConfig) -> LdcParams {
    LdcParams {
        epsilon: config.epsilon,
        ..LdcParams::default()
    }
}

/// Executes `config` and writes every requested output. Returns
/// [`Error::AuditFailed`] after writing outputs when validation finds
/// violations.
pub fn run(config: &ExperimentConfig) -> Result<RunOutcome> {
    config.validate()?;
    match config.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?
            .install(|| run_inner(config)),
        None => run_inner(config),
    }
}

/// Re-executes the configuration recorded in a manifest.
pub fn run_manifest(path: &Path) -> Result<RunOutcome> {
    run(&Manifest::read(path)?.config)
}

fn run_inner(config: &ExperimentConfig) -> Result<RunOutcome> {
    let g = config.graph.load()?;
    let n = g.node_count();
    let diameter = match config.diameter {
        DiameterSpec::Value(d) => d,
        DiameterSpec::Keyword(DiameterKeyword::Auto) => {
            let d = weighted_diameter(&g);
            if d > 0.0 {
                d
            } else {
                log::warn!("graph has no edges; using diameter 1");
                1.0
            }
        }
    };
    let stream = Stream::new(config.seed);
    let options = MeasureOptions {
        backend: config.backend,
        audit_diameter: false,
    };
    let needs_k = matches!(
        config.algorithm,
        Algorithm::Separator | Algorithm::Backbone | Algorithm::KpathLdd
    );
    let k = needs_k.then(|| resolve_k(config, n)).or(config.k);
    let backbone_params = BackboneParams::for_profile(config.profile);

    let mut counters = OracleCounters::default();
    let mut audit = None;
    let (result, table, summary) = match config.algorithm {
        Algorithm::Ldd | Algorithm::Ldc | Algorithm::KpathLdd => {
            let driver = match config.algorithm {
                Algorithm::Ldd => DriverConfig::GeneralLdd {
                    diameter,
                    divisor: 8.0,
                    params: ldc_params(config),
                },
                Algorithm::Ldc => DriverConfig::SingleLdc {
                    diameter,
                    params: ldc_params(config),
                },
                _ => DriverConfig::KPathLdd {
                    diameter,
                    k: k.expect("k resolved"),
                    params: backbone_params,
                },
            };
            let trials = stream.child("trials", 0);
            let stats = measure_cut_rates(&g, &driver, config.trials, trials, options)?;
            let mut oracle = SsspOracle::new(config.backend);
            let c = driver.run(&g, &mut oracle, trials.child("trial", 0))?;
            counters = stats.counters;
            let result = json!({
                "schema_version": SCHEMA_VERSION,
                "algorithm": config.algorithm.name(),
                "diameter": diameter,
                "diameter_bound": driver.diameter_bound(),
                "seed": config.seed,
                "clustering": c,
            });
            let summary = stats_summary(&stats);
            (result, Table::PerEdge(stats), summary)
        }
        Algorithm::Separator => {
            let k = k.expect("k resolved");
            let eps = config.epsilon.expect("validated");
            let params = SeparatorParams::default();
            let mut rows = Vec::new();
            let mut first = None;
            let runs: Vec<_> = (0..config.trials)
                .map(|t| {
                    let mut oracle = SsspOracle::new(config.backend);
                    let s = sample_weak_separator(
                        &g,
                        &g.all_nodes(),
                        diameter,
                        eps,
                        k,
                        &params,
                        &mut oracle,
                        stream.child("trial", t as u64),
                    )?;
                    Ok((s, oracle.counters_snapshot()))
                })
                .collect::<Result<_>>()?;
            for (t, (s, c)) in runs.into_iter().enumerate() {
                counters.merge(&c);
                rows.push(SeparatorRow {
                    trial: t,
                    iterations: s.iterations_run,
                    paths: s.entries.len(),
                    removed: s.removed.len(),
                    verified: s.verified,
                    sssp_calls: c.sssp_calls,
                });
                if first.is_none() {
                    first = Some(s);
                }
            }
            let s = first.expect("at least one trial");
            let verified = rows.iter().filter(|r| r.verified).count();
            let result = json!({
                "schema_version": SCHEMA_VERSION,
                "algorithm": "separator",
                "diameter": diameter,
                "epsilon": eps,
                "k": k,
                "seed": config.seed,
                "iterations_run": s.iterations_run,
                "iteration_budget": s.iteration_budget,
                "verified": s.verified,
                "removed": s.removed.to_vec(),
                "entries": s.entries,
            });
            let summary = json!({
                "trials": config.trials,
                "verified_trials": verified,
            });
            (result, Table::Separator(rows), summary)
        }
        Algorithm::Backbone => {
            let k = k.expect("k resolved");
            let mut stats = RunStats::new(g.edge_count());
            let mut first = None;
            let runs: Vec<_> = (0..config.trials)
                .map(|t| {
                    let mut oracle = SsspOracle::new(config.backend);
                    let bc = build_backbone_clustering(
                        &g,
                        &g.all_nodes(),
                        diameter,
                        k,
                        &backbone_params,
                        &mut oracle,
                        stream.child("trial", t as u64),
                    )?;
                    Ok((bc, oracle.counters_snapshot()))
                })
                .collect::<Result<_>>()?;
            for (bc, c) in runs {
                let mut cut = vec![false; g.edge_count()];
                for &(e, _) in &bc.cut_edges {
                    cut[e] = true;
                }
                stats.record(&cut, &c, bc.rounds, 1.0, f64::NAN);
                if first.is_none() {
                    first = Some(bc);
                }
            }
            counters = stats.counters;
            let bc = first.expect("at least one trial");
            let nets: Vec<Vec<Vec<usize>>> = bc
                .clusters
                .iter()
                .map(|c| {
                    c.backbone
                        .iter()
                        .map(|p| path_net(&g, p, bc.d_bc).map(|n| n.marks))
                        .collect::<Result<_>>()
                })
                .collect::<Result<_>>()?;
            let result = json!({
                "schema_version": SCHEMA_VERSION,
                "algorithm": "backbone",
                "diameter": diameter,
                "k": k,
                "seed": config.seed,
                "profile": config.profile,
                "backbone": bc,
                "nets": nets,
            });
            let summary = stats_summary(&stats);
            (result, Table::PerEdge(stats), summary)
        }
        Algorithm::Validate => {
            let mut drivers = vec![DriverConfig::GeneralLdd {
                diameter,
                divisor: 8.0,
                params: ldc_params(config),
            }];
            if let Some(k) = config.k {
                drivers.push(DriverConfig::KPathLdd {
                    diameter,
                    k,
                    params: backbone_params,
                });
            }
            let mut report = AuditReport {
                diameters_exact: true,
                ..AuditReport::default()
            };
            let mut stats = RunStats::new(g.edge_count());
            for (i, driver) in drivers.iter().enumerate() {
                let base = stream.child("driver", i as u64);
                let runs: Vec<_> = (0..config.trials)
                    .map(|t| {
                        let mut oracle = SsspOracle::new(config.backend);
                        let c = driver.run(&g, &mut oracle, base.child("trial", t as u64))?;
                        let a = audit_clustering(&g, &c, driver.is_total(), driver.diameter_bound());
                        Ok((c, a, oracle.counters_snapshot()))
                    })
                    .collect::<Result<_>>()?;
                for (c, a, ctr) in runs {
                    if i == 0 {
                        let mut cut = vec![false; g.edge_count()];
                        for &e in &c.cut_edges {
                            cut[e] = true;
                        }
                        stats.record(&cut, &ctr, c.rounds, 1.0, a.max_strong_diameter);
                    } else {
                        counters.merge(&ctr);
                    }
                    report.violations.extend(a.violations);
                    report.max_strong_diameter = report.max_strong_diameter.max(a.max_strong_diameter);
                    report.diameters_exact &= a.diameters_exact;
                }
            }
            counters.merge(&stats.counters);
            let result = json!({
                "schema_version": SCHEMA_VERSION,
                "algorithm": "validate",
                "diameter": diameter,
                "seed": config.seed,
                "drivers": drivers,
                "audit": report,
            });
            let summary = json!({
                "violations": report.violations.len(),
                "max_strong_diameter": report.max_strong_diameter,
            });
            audit = Some(report);
            (result, Table::PerEdge(stats), summary)
        }
        Algorithm::Bench => {
            let driver = DriverConfig::GeneralLdd {
                diameter,
                divisor: 8.0,
                params: ldc_params(config),
            };
            let start = std::time::Instant::now();
            let stats = measure_cut_rates(&g, &driver, config.trials, stream.child("trials", 0), options)?;
            log::info!("{} trials in {:.3?}", config.trials, start.elapsed());
            counters = stats.counters;
            let summary = stats_summary(&stats);
            let result = json!({
                "schema_version": SCHEMA_VERSION,
                "algorithm": "bench",
                "diameter": diameter,
                "seed": config.seed,
                "summary": summary,
            });
            (result, Table::PerTrial(stats), summary)
        }
    };

    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        resolved: Resolved {
            node_count: n,
            edge_count: g.edge_count(),
            diameter,
            k,
        },
        counters,
        summary,
    };
    if let Some(path) = &config.outputs.result {
        write_json(path, &result)?;
    }
    if let Some(path) = &config.outputs.stats {
        table.write(path, &g)?;
    }
    if let Some(path) = &config.outputs.manifest {
        write_json(path, &manifest)?;
    }
    if let Some(a) = &audit {
        if !a.is_clean() {
            for v in &a.violations {
                log::error!("audit violation: {v:?}");
            }
            return Err(Error::AuditFailed {
                violations: a.violations.len(),
            });
        }
    }
    Ok(RunOutcome {
        manifest,
        result,
        audit,
    })
}

fn stats_summary(stats: &RunStats) -> serde_json::Value {
    let t = stats.trials.max(1) as f64;
    json!({
        "trials": stats.trials,
        "max_recursion_depth": stats.recursion_depth,
        "mean_sssp_calls": stats.counters.sssp_calls as f64 / t,
        "max_sssp_calls": stats.sssp_calls_per_trial.iter().max().copied().unwrap_or(0),
        "mean_clustered_fraction": stats.clustered_fraction_per_trial.iter().sum::<f64>() / t,
    })
}

#[derive(Serialize)]
struct SeparatorRow {
    trial: usize,
    iterations: usize,
    paths: usize,
    removed: usize,
    verified: bool,
    sssp_calls: u64,
}

enum Table {
    PerEdge(RunStats),
    PerTrial(RunStats),
    Separator(Vec<SeparatorRow>),
}

#[derive(Serialize)]
struct EdgeRow {
    edge_id: usize,
    u: usize,
    v: usize,
    length: f64,
    cuts: u64,
    trials: usize,
    rate: f64,
    wilson_lo: f64,
    wilson_hi: f64,
}

#[derive(Serialize)]
struct TrialRow {
    trial: usize,
    depth: usize,
    sssp_calls: u64,
    clustered_fraction: f64,
}

impl Table {
    fn write(&self, path: &Path, g: &WeightedGraph<f64>) -> Result<()> {
        let mut w = csv::Writer::from_writer(create(path)?);
        match self {
            Table::PerEdge(stats) => {
                for (id, e) in g.edges().iter().enumerate() {
                    let cuts = stats.per_edge_cut_count[id];
                    let (lo, hi) = wilson_interval(cuts, stats.trials as u64, 0.95);
                    w.serialize(EdgeRow {
                        edge_id: id,
                        u: e.u,
                        v: e.v,
                        length: e.length,
                        cuts,
                        trials: stats.trials,
                        rate: stats.cut_rate(id),
                        wilson_lo: lo,
                        wilson_hi: hi,
                    })?;
                }
            }
            Table::PerTrial(stats) => {
                for t in 0..stats.trials {
                    w.serialize(TrialRow {
                        trial: t,
                        depth: stats.depth_per_trial[t],
                        sssp_calls: stats.sssp_calls_per_trial[t],
                        clustered_fraction: stats.clustered_fraction_per_trial[t],
                    })?;
                }
            }
            Table::Separator(rows) => {
                for r in rows {
                    w.serialize(r)?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_config(algorithm: Algorithm) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(
            GraphSource::Generated {
                generator: GeneratorSpec::Path,
                nodes: 16,
                seed: 0,
            },
            algorithm,
            DiameterSpec::Value(8.0),
        );
        c.trials = 4;
        c
    }

    #[test]
    fn diameter_spec_parses() {
        assert_eq!("auto".parse::<DiameterSpec>().unwrap(), DiameterSpec::AUTO);
        assert_eq!("2.5".parse::<DiameterSpec>().unwrap(), DiameterSpec::Value(2.5));
        assert!("x".parse::<DiameterSpec>().is_err());
        let json = serde_json::to_string(&DiameterSpec::AUTO).unwrap();
        assert_eq!(json, "\"auto\"");
        assert_eq!(serde_json::from_str::<DiameterSpec>("3.0").unwrap(), DiameterSpec::Value(3.0));
    }

    #[test]
    fn config_round_trips() {
        let c = path_config(Algorithm::KpathLdd);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&s).unwrap(), c);
    }

    #[test]
    fn separator_requires_epsilon() {
        let c = path_config(Algorithm::Separator);
        assert!(matches!(run(&c), Err(Error::InvalidParameter { name: "epsilon", .. })));
    }

    #[test]
    fn every_algorithm_runs() {
        for a in [
            Algorithm::Ldd,
            Algorithm::Ldc,
            Algorithm::Separator,
            Algorithm::Backbone,
            Algorithm::KpathLdd,
            Algorithm::Validate,
            Algorithm::Bench,
        ] {
            let mut c = path_config(a);
            c.epsilon = (a == Algorithm::Separator).then_some(0.25);
            c.k = Some(1);
            let out = run(&c).unwrap_or_else(|e| panic!("{}: {e}", a.name()));
            assert_eq!(out.manifest.resolved.node_count, 16);
        }
    }

    #[test]
    fn output_dir_only_moves_relative_paths() {
        let mut c = path_config(Algorithm::Ldd);
        c.outputs.result = Some(PathBuf::from("r.json"));
        c.outputs.stats = Some(PathBuf::from("/abs/s.csv"));
        let moved = c.with_output_dir(Path::new("/tmp/x"));
        assert_eq!(moved.outputs.result, Some(PathBuf::from("/tmp/x/r.json")));
        assert_eq!(moved.outputs.stats, Some(PathBuf::from("/abs/s.csv")));
        assert_eq!(moved.outputs.manifest, None);
    }

    #[test]
    fn auto_diameter_is_exact() {
        let mut c = path_config(Algorithm::Ldd);
        c.diameter = DiameterSpec::AUTO;
        assert_eq!(run(&c).unwrap().manifest.resolved.diameter, 15.0);
    }
}
