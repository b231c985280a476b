use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lowdiam::backbone::Profile;
use lowdiam::experiment::{
    run, Algorithm, DiameterSpec, ExperimentConfig, GraphSource, Manifest, OutputPaths, RunOutcome,
};
use lowdiam::graph::generate::{generate, GeneratorSpec};
use lowdiam::graph::io::write_edge_list;
use lowdiam::oracle::Backend;
use lowdiam::{Error, Graph};

#[derive(Parser)]
#[command(name = "lowdiam", version, about = "Low-diameter decompositions and path separators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph as an edge list.
    Gen(GenArgs),
    /// Decomposition for general graphs.
    Ldd(RunArgs),
    /// A single partial clustering.
    Ldc(RunArgs),
    /// Weak path separator.
    Separator(RunArgs),
    /// Backbone clustering for path-separable graphs.
    Backbone(RunArgs),
    /// Decomposition for path-separable graphs.
    KpathLdd(RunArgs),
    /// Audit decompositions over many seeds; exits with 3 on violations.
    Validate(RunArgs),
    /// Oracle call and recursion statistics.
    Bench(RunArgs),
    /// Run a configuration file or re-run a manifest.
    Run(ReplayArgs),
}

#[derive(Args)]
struct GeneratorArgs {
    /// Generator: path, weighted-path, grid, random-tree, random-connected, ktree.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    max_weight: f64,
    /// Clique width for ktree.
    #[arg(long, default_value_t = 3)]
    width: usize,
    #[arg(long)]
    extra_edges: Option<usize>,
    /// Seed for the generator (independent of the run seed).
    #[arg(long, default_value_t = 0)]
    graph_seed: u64,
}

impl GeneratorArgs {
    fn spec(&self) -> Result<Option<(GeneratorSpec, usize)>, Error> {
        match (&self.kind, self.n) {
            (Some(kind), Some(n)) => Ok(Some((
                GeneratorSpec::from_kind(kind, self.max_weight, self.width, self.extra_edges)?,
                n,
            ))),
            (None, None) => Ok(None),
            _ => Err(Error::InvalidParameter {
                name: "kind",
                reason: "--kind and --n go together".into(),
            }),
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    generator: GeneratorArgs,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Analysis,
    Desk,
}

#[derive(Args)]
struct RunArgs {
    /// Graph file (edge list, or DIMACS for .gr/.dimacs).
    #[arg(long, short, conflicts_with = "kind")]
    input: Option<PathBuf>,
    #[command(flatten)]
    generator: GeneratorArgs,
    /// Target diameter, or `auto` for the exact weighted diameter.
    #[arg(long, short = 'D', default_value = "auto")]
    diameter: DiameterSpec,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Declared path-separability.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "desk")]
    profile: ProfileArg,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, env = "LOWDIAM_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads for independent trials.
    #[arg(long)]
    jobs: Option<usize>,
    /// Use the perturbed approximate oracle with this seed.
    #[arg(long)]
    perturb_seed: Option<u64>,
    /// Result JSON path.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Statistics CSV path.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Run manifest path.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    /// Experiment configuration (JSON).
    #[arg(long, conflicts_with = "manifest", required_unless_present = "manifest")]
    config: Option<PathBuf>,
    /// Manifest of an earlier run to reproduce.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Directory for relative output paths (default: current directory).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn build_config(algorithm: Algorithm, a: RunArgs) -> Result<ExperimentConfig, Error> {
    let (graph, declared_k) = match (a.input, a.generator.spec()?) {
        (Some(path), None) => (GraphSource::File { path }, None),
        (None, Some((spec, n))) => {
            let k = spec.declared_k();
            (
                GraphSource::Generated {
                    generator: spec,
                    nodes: n,
                    seed: a.generator.graph_seed,
                },
                k,
            )
        }
        _ => {
            return Err(Error::InvalidParameter {
                name: "input",
                reason: "give either --input or --kind with --n".into(),
            })
        }
    };
    let mut config = ExperimentConfig::new(graph, algorithm, a.diameter);
    config.epsilon = a.epsilon;
    config.k = a.k.or(declared_k);
    config.profile = match a.profile {
        ProfileArg::Analysis => Profile::Analysis,
        ProfileArg::Desk => Profile::Desk,
    };
    config.trials = a.trials;
    config.seed = a.seed;
    config.jobs = a.jobs;
    if let Some(seed) = a.perturb_seed {
        config.backend = Backend::Perturbed { seed };
    }
    config.outputs = OutputPaths {
        result: a.out,
        stats: a.stats,
        manifest: a.manifest,
    };
    Ok(config)
}

fn report(outcome: &RunOutcome, print_result: bool) -> Result<(), Error> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if print_result {
        serde_json::to_writer_pretty(&mut out, &outcome.result)?;
    } else {
        serde_json::to_writer_pretty(&mut out, &outcome.manifest.summary)?;
    }
    writeln!(out)?;
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Error> {
    let (algorithm, args) = match cli.command {
        Command::Gen(g) => {
            let (spec, n) = g.generator.spec()?.ok_or_else(|| Error::InvalidParameter {
                name: "kind",
                reason: "--kind and --n are required".into(),
            })?;
            let graph: Graph = generate(&spec, n, g.generator.graph_seed)?;
            return match g.output {
                Some(path) => write_edge_list(&graph, BufWriter::new(File::create(path)?)),
                None => write_edge_list(&graph, io::stdout().lock()),
            };
        }
        Command::Run(r) => {
            let mut config: ExperimentConfig = match (r.config, r.manifest) {
                (Some(path), _) => serde_json::from_reader(File::open(path)?)?,
                (None, Some(path)) => Manifest::read(&path)?.config,
                (None, None) => unreachable!("clap requires one of the two"),
            };
            config.jobs = r.jobs.or(config.jobs);
            if let Some(dir) = r.out_dir {
                config = config.with_output_dir(&dir);
            }
            let outcome = run(&config)?;
            return report(&outcome, false);
        }
        Command::Ldd(a) => (Algorithm::Ldd, a),
        Command::Ldc(a) => (Algorithm::Ldc, a),
        Command::Separator(a) => (Algorithm::Separator, a),
        Command::Backbone(a) => (Algorithm::Backbone, a),
        Command::KpathLdd(a) => (Algorithm::KpathLdd, a),
        Command::Validate(a) => (Algorithm::Validate, a),
        Command::Bench(a) => (Algorithm::Bench, a),
    };
    let print_result = args.out.is_none();
    let config = build_config(algorithm, args)?;
    let outcome = run(&config)?;
    report(&outcome, print_result)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
