//! The `deko` command line.
//!
//! Every subcommand reads JSON documents (see [`crate::io`]) and writes JSON
//! to `--out` or stdout. Randomized commands need an explicit `--seed`.
//! Exit codes: 0 success, 2 usage/validation/input errors, 3 resource
//! guards.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::convergence::{
    cauchy_report, density_trace, pattern_catalog, sampling_consistency, wrandom_with, DiagonalPolicy,
    SamplingOptions, Target, TraceOptions, HEURISTIC_NOTE,
};
use crate::cutnorm::{cut_norm_exact, cut_norm_heuristic};
use crate::error::{argument, Error, Result};
use crate::graph::{DecoratedGraph, PatternGraph};
use crate::graphon::{
    density_graphon_estimate, density_graphon_with_guard, density_sequence_with_guard, embed_graph, reconstruct,
    KernelMatrix, MomentFunctionSequence, StepGraphon,
};
use crate::hom::{density_estimate, density_with_guard, DEFAULT_GUARD};
use crate::io::{self, decode_element, to_json, Document};
use crate::regularity::{regularize_graphon_with, weak_regularity_with, WitnessSearch};
use crate::sampling::{empirical_distribution, exact_sample_distribution};
use crate::space::{default_family, DecorationSpace, FamilyParams, SpaceRef, TestFamily};

#[derive(Debug, Parser)]
#[command(name = "deko", version, about = "Decorated graph limits toolkit")]
struct Cli {
    /// Worker threads (default: DEKO_THREADS, then available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// File of `key = value` defaults: threads, reps, restarts, kmax,
    /// edge_budget, tol, window, eps, guard, max_degree, max_support.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Homomorphism density t(F, G), t(F, W) or t(F, s).
    Density(DensityArgs),
    /// Distribution of induced k-node samples.
    Sample(SampleArgs),
    /// Moment components of a graphon under a test family.
    Moments(MomentsArgs),
    /// Graphon from the indicator moments of a finite space.
    Reconstruct(ReconstructArgs),
    /// Cut norm of a kernel matrix.
    Cutnorm(CutnormArgs),
    /// Weak regularity partition of a graphon or kernel matrix.
    Regularity(RegularityArgs),
    /// Density trace and convergence diagnostics for a sequence.
    Converge(ConvergeArgs),
    /// W-random graph from a step graphon.
    Wrandom(WrandomArgs),
    /// Canonical pattern catalog over a test family.
    Catalog(CatalogArgs),
}

#[derive(Debug, Args)]
struct FamilyOpts {
    /// `default` or a family JSON file.
    #[arg(long, default_value = "default")]
    family: String,
    /// Largest monomial degree of the default interval family.
    #[arg(long)]
    max_degree: Option<u32>,
    /// Largest support of the default product family.
    #[arg(long)]
    max_support: Option<u32>,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long, group = "target", required = true)]
    graph: Option<PathBuf>,
    #[arg(long, group = "target")]
    graphon: Option<PathBuf>,
    #[arg(long, group = "target")]
    moments: Option<PathBuf>,
    /// Monte Carlo estimate instead of exact enumeration.
    #[arg(long)]
    estimate: bool,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Work budget of exact enumeration.
    #[arg(long)]
    guard: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Enumerate all k-subsets instead of sampling.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MomentsArgs {
    #[arg(long, group = "source", required = true)]
    graphon: Option<PathBuf>,
    /// Use the step graphon of a graph.
    #[arg(long, group = "source")]
    graph: Option<PathBuf>,
    #[command(flatten)]
    family: FamilyOpts,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReconstructArgs {
    #[arg(long)]
    moments: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CutnormArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, conflicts_with = "heuristic")]
    exact: bool,
    #[arg(long)]
    heuristic: bool,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RegularityArgs {
    #[arg(long, group = "source", required = true)]
    graphon: Option<PathBuf>,
    #[arg(long, group = "source")]
    matrix: Option<PathBuf>,
    #[arg(long)]
    eps: Option<f64>,
    #[command(flatten)]
    family: FamilyOpts,
    /// Use the alternating heuristic for witnesses.
    #[arg(long)]
    heuristic: bool,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[arg(long, num_args = 1.., group = "sequence", required = true)]
    graphs: Vec<PathBuf>,
    #[arg(long, num_args = 1.., group = "sequence")]
    graphons: Vec<PathBuf>,
    #[arg(long)]
    kmax: Option<usize>,
    /// Largest number of pattern edges (default: all pairs).
    #[arg(long)]
    edge_budget: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    window: Option<usize>,
    #[command(flatten)]
    family: FamilyOpts,
    #[arg(long)]
    guard: Option<f64>,
    /// Also compare empirical sample laws (graphs only).
    #[arg(long)]
    sampling: bool,
    /// Sample size for --sampling (default: kmax).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the density trace as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct WrandomArgs {
    #[arg(long)]
    graphon: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Diagonal decoration (default: the space's zero element).
    #[arg(long)]
    diagonal: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CatalogArgs {
    /// Space JSON, needed with `--family default`.
    #[arg(long)]
    space: Option<PathBuf>,
    #[command(flatten)]
    family: FamilyOpts,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    edge_budget: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Defaults read from `--config`.
#[derive(Debug, Default)]
struct Config {
    table: toml::Table,
}

impl Config {
    fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = io::read_text(path)?;
        let table = text
            .parse::<toml::Table>()
            .map_err(|e| Error::Validation(format!("config {}: {e}", path.display())))?;
        const KEYS: [&str; 11] = [
            "threads",
            "reps",
            "restarts",
            "kmax",
            "edge_budget",
            "tol",
            "window",
            "eps",
            "guard",
            "max_degree",
            "max_support",
        ];
        if let Some(key) = table.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::Validation(format!("unknown config key `{key}`")));
        }
        Ok(Config { table })
    }

    fn int(&self, key: &str) -> Result<Option<u64>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_integer()
                .and_then(|i| u64::try_from(i).ok())
                .map(Some)
                .ok_or_else(|| Error::Validation(format!("config `{key}` must be a non-negative integer"))),
        }
    }

    fn real(&self, key: &str) -> Result<Option<f64>> {
        match self.table.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_float()
                .or_else(|| v.as_integer().map(|i| i as f64))
                .map(Some)
                .ok_or_else(|| Error::Validation(format!("config `{key}` must be a number"))),
        }
    }

    fn usize_or(&self, flag: Option<usize>, key: &str, default: usize) -> Result<usize> {
        Ok(match flag {
            Some(v) => v,
            None => self.int(key)?.map_or(default, |v| v as usize),
        })
    }

    fn f64_or(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64> {
        Ok(match flag {
            Some(v) => v,
            None => self.real(key)?.unwrap_or(default),
        })
    }
}

const DEFAULT_REPS: usize = 100_000;
const DEFAULT_RESTARTS: usize = 20;

fn require_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| argument(format!("{what} is randomized; pass --seed")))
}

fn emit<T: Serialize + ?Sized>(value: &T, out: Option<&Path>) -> Result<()> {
    emit_text(&to_json(value)?, out)
}

fn emit_text(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => io::write_text(path, text),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn family_for(opts: &FamilyOpts, space: &SpaceRef, config: &Config) -> Result<TestFamily> {
    if opts.family == "default" {
        let defaults = FamilyParams::default();
        let params = FamilyParams {
            max_degree: match opts.max_degree {
                Some(d) => d,
                None => config.int("max_degree")?.map_or(defaults.max_degree, |v| v as u32),
            },
            max_support: match opts.max_support {
                Some(b) => b,
                None => config.int("max_support")?.map_or(defaults.max_support, |v| v as u32),
            },
        };
        default_family(space, params)
    } else {
        let family: TestFamily = io::load(Path::new(&opts.family))?;
        if **family.space() != **space {
            return Err(argument("the family lives on a different space than the input"));
        }
        Ok(family)
    }
}

#[derive(Serialize)]
struct DensityOut {
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    stderr: Option<f64>,
}

fn run_density(a: &DensityArgs, config: &Config) -> Result<()> {
    let f: PatternGraph = io::load(&a.pattern)?;
    let guard = config.f64_or(a.guard, "guard", DEFAULT_GUARD)?;
    let out = if a.estimate {
        let seed = require_seed(a.seed, "density --estimate")?;
        let reps = config.usize_or(a.reps, "reps", DEFAULT_REPS)?;
        let est = if let Some(p) = &a.graph {
            density_estimate(&f, &io::load::<DecoratedGraph>(p)?, reps, seed)?
        } else if let Some(p) = &a.graphon {
            density_graphon_estimate(&f, &io::load::<StepGraphon>(p)?, reps, seed)?
        } else {
            return Err(argument("--estimate needs --graph or --graphon"));
        };
        DensityOut {
            value: est.estimate,
            stderr: Some(est.stderr),
        }
    } else {
        let value = if let Some(p) = &a.graph {
            density_with_guard(&f, &io::load::<DecoratedGraph>(p)?, guard)?
        } else if let Some(p) = &a.graphon {
            density_graphon_with_guard(&f, &io::load::<StepGraphon>(p)?, guard)?
        } else {
            let path = a.moments.as_ref().expect("clap requires one target");
            density_sequence_with_guard(&f, &io::load::<MomentFunctionSequence>(path)?, guard)?
        };
        DensityOut { value, stderr: None }
    };
    emit(&out, a.out.as_deref())
}

fn run_sample(a: &SampleArgs, config: &Config) -> Result<()> {
    let g: DecoratedGraph = io::load(&a.graph)?;
    let dist = if a.exact {
        exact_sample_distribution(&g, a.k)?
    } else {
        let seed = require_seed(a.seed, "sample")?;
        let reps = config.usize_or(a.reps, "reps", DEFAULT_REPS)?;
        empirical_distribution(&g, a.k, reps, seed)?
    };
    emit(&dist.to_repr(), a.out.as_deref())
}

fn load_graphon(graphon: Option<&PathBuf>, graph: Option<&PathBuf>) -> Result<StepGraphon> {
    match (graphon, graph) {
        (Some(p), _) => io::load(p),
        (None, Some(p)) => Ok(embed_graph(&io::load::<DecoratedGraph>(p)?)),
        (None, None) => Err(argument("pass --graphon or --graph")),
    }
}

fn run_moments(a: &MomentsArgs, config: &Config) -> Result<()> {
    let w = load_graphon(a.graphon.as_ref(), a.graph.as_ref())?;
    let family = family_for(&a.family, w.space(), config)?;
    emit(&w.moments(&family)?.to_repr(), a.out.as_deref())
}

fn run_reconstruct(a: &ReconstructArgs) -> Result<()> {
    let s: MomentFunctionSequence = io::load(&a.moments)?;
    emit(&reconstruct(&s)?.to_repr(), a.out.as_deref())
}

#[derive(Serialize)]
struct CutnormOut {
    value: f64,
    #[serde(rename = "witness_S")]
    witness_s: Vec<usize>,
    #[serde(rename = "witness_T")]
    witness_t: Vec<usize>,
    mode: &'static str,
}

fn run_cutnorm(a: &CutnormArgs, config: &Config) -> Result<()> {
    let x: KernelMatrix = io::load(&a.matrix)?;
    let (c, mode) = if a.heuristic {
        let seed = require_seed(a.seed, "cutnorm --heuristic")?;
        let restarts = config.usize_or(a.restarts, "restarts", DEFAULT_RESTARTS)?;
        (cut_norm_heuristic(&x, restarts, seed)?, "heuristic")
    } else {
        (cut_norm_exact(&x)?, "exact")
    };
    emit(
        &CutnormOut {
            value: c.value,
            witness_s: c.witness.rows,
            witness_t: c.witness.cols,
            mode,
        },
        a.out.as_deref(),
    )
}

#[derive(Serialize)]
struct RegularityOut {
    eps: f64,
    m: usize,
    groups: Vec<Vec<usize>>,
    achieved: Vec<f64>,
    certified: bool,
    rounds: usize,
    mode: &'static str,
}

fn run_regularity(a: &RegularityArgs, config: &Config) -> Result<()> {
    let eps = config.f64_or(a.eps, "eps", 0.25)?;
    let search = if a.heuristic {
        WitnessSearch {
            force_heuristic: true,
            restarts: config.usize_or(a.restarts, "restarts", DEFAULT_RESTARTS)?,
            seed: require_seed(a.seed, "regularity --heuristic")?,
        }
    } else {
        WitnessSearch {
            restarts: config.usize_or(a.restarts, "restarts", DEFAULT_RESTARTS)?,
            seed: a.seed.unwrap_or(0),
            ..WitnessSearch::default()
        }
    };
    let out = if let Some(p) = &a.matrix {
        let x: KernelMatrix = io::load(p)?;
        let r = weak_regularity_with(&x, eps, &search)?;
        RegularityOut {
            eps,
            m: x.m(),
            groups: r.partition.groups().to_vec(),
            achieved: vec![r.achieved],
            certified: r.certified,
            rounds: r.rounds.len(),
            mode: mode_name(&search, x.m()),
        }
    } else {
        let w = load_graphon(a.graphon.as_ref(), None)?;
        let family = family_for(&a.family, w.space(), config)?;
        let r = regularize_graphon_with(&w, &family, eps, &search)?;
        RegularityOut {
            eps,
            m: w.m(),
            groups: r.partition.groups().to_vec(),
            achieved: r.achieved,
            certified: r.certified,
            rounds: r.rounds.len(),
            mode: mode_name(&search, w.m()),
        }
    };
    emit(&out, a.out.as_deref())
}

fn mode_name(search: &WitnessSearch, m: usize) -> &'static str {
    if search.force_heuristic || m > crate::cutnorm::EXACT_MAX_M {
        "heuristic"
    } else {
        "exact"
    }
}

#[derive(Serialize)]
struct CauchyOut {
    window: usize,
    tol: f64,
    max_step: Vec<f64>,
    converged: Vec<bool>,
    all_converged: bool,
}

#[derive(Serialize)]
struct SamplingOut {
    k: usize,
    reps: usize,
    tv: Vec<f64>,
    converged: bool,
    linkage_ok: bool,
}

#[derive(Serialize)]
struct ConvergeOut {
    note: &'static str,
    kmax: usize,
    edge_budget: usize,
    catalog_size: usize,
    exact: bool,
    trace: Vec<Vec<f64>>,
    cauchy: CauchyOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    sampling: Option<SamplingOut>,
}

fn run_converge(a: &ConvergeArgs, config: &Config) -> Result<()> {
    let graphs: Vec<DecoratedGraph> = a.graphs.iter().map(|p| io::load(p)).collect::<Result<_>>()?;
    let graphons: Vec<StepGraphon> = a.graphons.iter().map(|p| io::load(p)).collect::<Result<_>>()?;
    let targets: Vec<Target<'_>> = if graphs.is_empty() {
        graphons.iter().map(Target::Graphon).collect()
    } else {
        graphs.iter().map(Target::Graph).collect()
    };
    let space = match targets.first() {
        Some(Target::Graph(g)) => g.space().clone(),
        Some(Target::Graphon(w)) => w.space().clone(),
        None => return Err(argument("the sequence is empty")),
    };
    let kmax = config.usize_or(a.kmax, "kmax", 3)?;
    let edge_budget = config.usize_or(a.edge_budget, "edge_budget", kmax * kmax.saturating_sub(1) / 2)?;
    let tol = config.f64_or(a.tol, "tol", 0.05)?;
    let window = config.usize_or(a.window, "window", 2)?;
    let guard = config.f64_or(a.guard, "guard", DEFAULT_GUARD)?;
    let family = family_for(&a.family, &space, config)?;
    let catalog = pattern_catalog(&family, kmax, edge_budget)?;
    let trace = density_trace(&targets, &catalog, &TraceOptions { guard, fallback: None })?;
    let values = trace.values();
    let cauchy = cauchy_report(&values, window, tol)?;
    let sampling = if a.sampling {
        if graphs.is_empty() {
            return Err(argument("--sampling needs --graphs"));
        }
        let opts = SamplingOptions {
            k: a.k.unwrap_or(kmax),
            reps: config.usize_or(a.reps, "reps", DEFAULT_REPS)?,
            seed: require_seed(a.seed, "converge --sampling")?,
            tol,
            window,
        };
        let r = sampling_consistency(&graphs, &catalog, &opts)?;
        Some(SamplingOut {
            k: opts.k,
            reps: opts.reps,
            tv: r.tv,
            converged: r.converged,
            linkage_ok: r.linkage_ok,
        })
    } else {
        None
    };
    if let Some(path) = &a.csv {
        io::write_text(path, &trace.to_csv())?;
    }
    let out = ConvergeOut {
        note: HEURISTIC_NOTE,
        kmax,
        edge_budget,
        catalog_size: catalog.len(),
        exact: trace.is_exact(),
        trace: values,
        cauchy: CauchyOut {
            window: cauchy.window,
            tol: cauchy.tol,
            max_step: cauchy.max_step,
            converged: cauchy.converged,
            all_converged: cauchy.all_converged,
        },
        sampling,
    };
    emit(&out, a.report.as_deref())
}

fn run_wrandom(a: &WrandomArgs) -> Result<()> {
    let w: StepGraphon = io::load(&a.graphon)?;
    let seed = require_seed(a.seed, "wrandom")?;
    let policy = match &a.diagonal {
        None => DiagonalPolicy::Zero,
        Some(text) => {
            let v: serde_json::Value = serde_json::from_str(text)?;
            DiagonalPolicy::Constant(decode_element(w.space(), &v)?)
        }
    };
    let g = wrandom_with(&w, a.n, seed, policy)?;
    emit(&g.to_repr(), a.out.as_deref())
}

fn run_catalog(a: &CatalogArgs, config: &Config) -> Result<()> {
    let family = if a.family.family == "default" {
        let path = a
            .space
            .as_ref()
            .ok_or_else(|| argument("--family default needs --space"))?;
        let space = SpaceRef::new(io::load::<DecorationSpace>(path)?);
        family_for(&a.family, &space, config)?
    } else {
        io::load::<TestFamily>(Path::new(&a.family.family))?
    };
    let kmax = config.usize_or(a.kmax, "kmax", 3)?;
    let edge_budget = config.usize_or(a.edge_budget, "edge_budget", kmax * kmax.saturating_sub(1) / 2)?;
    let catalog = pattern_catalog(&family, kmax, edge_budget)?;
    let reprs: Vec<_> = catalog.iter().map(PatternGraph::to_repr).collect();
    emit(&reprs, a.out.as_deref())
}

fn run(cli: &Cli, config: &Config) -> Result<()> {
    match &cli.command {
        Command::Density(a) => run_density(a, config),
        Command::Sample(a) => run_sample(a, config),
        Command::Moments(a) => run_moments(a, config),
        Command::Reconstruct(a) => run_reconstruct(a),
        Command::Cutnorm(a) => run_cutnorm(a, config),
        Command::Regularity(a) => run_regularity(a, config),
        Command::Converge(a) => run_converge(a, config),
        Command::Wrandom(a) => run_wrandom(a),
        Command::Catalog(a) => run_catalog(a, config),
    }
}

fn thread_count(cli: &Cli, config: &Config) -> Result<Option<usize>> {
    if let Some(n) = cli.threads {
        return Ok(Some(n));
    }
    if let Some(n) = config.int("threads")? {
        return Ok(Some(n as usize));
    }
    match std::env::var("DEKO_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Validation(format!("DEKO_THREADS={v} is not a thread count"))),
        Err(_) => Ok(None),
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_resource() {
        3
    } else {
        2
    }
}

/// Parse `argv` (program name first), run the command, and return the exit
/// code. Errors are reported on stderr.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = Config::load(cli.config.as_deref()).and_then(|config| {
        match thread_count(&cli, &config)? {
            Some(0) => Err(argument("--threads must be at least 1")),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Resource(format!("cannot start {n} threads: {e}")))?
                .install(|| run(&cli, &config)),
            None => run(&cli, &config),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parser_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(dispatch(["deko", "frobnicate"]), 2);
        assert_eq!(dispatch(["deko", "density", "--pattern"]), 2);
        assert_eq!(dispatch(["deko", "density", "--pattern", "/nonexistent/f.json", "--graph", "/nonexistent/g.json"]), 2);
        assert_eq!(dispatch(["deko", "--help"]), 0);
    }
}
