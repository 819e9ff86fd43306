//! Command-line front end.
//!
//! Every command is a pure function of its flags, input files and seed.
//! JSON goes to `--output`, else to `$DYNAMITE_OUT_DIR/<command>.json` when
//! that variable is set, else to stdout. `gen-planted` always writes files,
//! defaulting to `$DYNAMITE_OUT_DIR` or the working directory.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::{self, BenchConfig, BenchProblem, ChainProblem, Method};
use crate::chain::{make_cycle, make_cycle_function, MatrixKernel, ScalarFunction, TransitionMatrix};
use crate::coloring::{
    brute_force_count, jvv_count, CountResult, EdgeOrder, Graph, JvvConfig, LambdaPolicy,
    MeanEstimator,
};
use crate::dynamite::EstimateReport;
use crate::error::{Error, Result};
use crate::planted::{generate, PlantedParams};
use crate::spectral::{SpectralSummary, DEFAULT_STATE_CAP};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "DYNAMITE_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_STATISTICAL: i32 = 4;

pub fn exit_code(err: &Error) -> i32 {
    if err.is_guard() {
        EXIT_GUARD
    } else if err.is_statistical() {
        EXIT_STATISTICAL
    } else {
        EXIT_CONFIG
    }
}

#[derive(Debug, Parser)]
#[command(name = "dynamite", version, about = "Adaptive MCMC mean estimation and approximate coloring counts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact spectral summary and trace variances of an explicit chain.
    AnalyzeChain(AnalyzeArgs),
    /// Seeded mean-estimation replicates with a coverage summary.
    Estimate(EstimateArgs),
    /// Approximate number of proper k-colorings of a graph.
    CountColorings(CountArgs),
    /// Planted-partition graph plus a community sidecar.
    GenPlanted(PlantedArgs),
    /// Method comparison table as CSV.
    BenchCompare(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainKind {
    /// Lazy random walk on the n-cycle.
    Cycle,
    /// Every row uniform on n states.
    Uniform,
    /// Rows read from `--matrix`.
    Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FnKind {
    /// Cycle block function of half-width `--i`.
    CycleF,
    /// Indicator of `--states`.
    Indicator,
    /// Explicit per-state `--values`.
    Values,
}

#[derive(Clone, Debug, Args)]
pub struct ChainArgs {
    #[arg(long, value_enum, default_value = "cycle")]
    pub chain: ChainKind,
    /// Number of states.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// JSON file `{"rows": [[...], ...]}` for `--chain matrix`.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long = "fn", value_enum, default_value = "cycle-f")]
    pub function: FnKind,
    /// Half-width of the cycle block function.
    #[arg(long, default_value_t = 1)]
    pub i: usize,
    #[arg(long, value_delimiter = ',')]
    pub states: Vec<usize>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub values: Vec<f64>,
}

#[derive(Debug, Deserialize)]
struct MatrixFile {
    rows: Vec<Vec<f64>>,
}

impl ChainArgs {
    pub fn build(&self) -> Result<ChainProblem> {
        if self.chain != ChainKind::Matrix && self.n > DEFAULT_STATE_CAP {
            return Err(Error::TooLarge {
                states: self.n,
                cap: DEFAULT_STATE_CAP,
            });
        }
        let kernel = match self.chain {
            ChainKind::Cycle => make_cycle(self.n)?,
            ChainKind::Uniform => MatrixKernel::uniform(self.n)?,
            ChainKind::Matrix => {
                let path = self.matrix.as_ref().ok_or_else(|| {
                    Error::InvalidParameter("--chain matrix needs --matrix <file>".into())
                })?;
                let file: MatrixFile = serde_json::from_str(&fs::read_to_string(path)?)?;
                let m = TransitionMatrix::from_rows(&file.rows)?;
                let lazy = m.is_lazy();
                MatrixKernel::new(m, lazy, false, None)?
            }
        };
        let n = kernel.len();
        if n > DEFAULT_STATE_CAP && self.chain == ChainKind::Matrix {
            return Err(Error::TooLarge {
                states: n,
                cap: DEFAULT_STATE_CAP,
            });
        }
        let f = match self.function {
            FnKind::CycleF => {
                if self.chain != ChainKind::Cycle {
                    return Err(Error::InvalidParameter(
                        "--fn cycle-f needs --chain cycle".into(),
                    ));
                }
                make_cycle_function(n, self.i)?
            }
            FnKind::Indicator => ScalarFunction::indicator(n, &self.states)?,
            FnKind::Values => {
                if self.values.len() != n {
                    return Err(Error::LengthMismatch {
                        first: n,
                        second: self.values.len(),
                    });
                }
                let lower = self.values.iter().copied().fold(f64::INFINITY, f64::min);
                let upper = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                ScalarFunction::from_values(self.values.clone(), lower, upper)?
            }
        };
        let name = match self.chain {
            ChainKind::Cycle => format!("cycle{n}"),
            ChainKind::Uniform => format!("uniform{n}"),
            ChainKind::Matrix => format!("matrix{n}"),
        };
        ChainProblem::new(name, kernel, f)
    }
}

#[derive(Clone, Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Trace lengths to evaluate.
    #[arg(long = "T", value_delimiter = ',', default_value = "1")]
    pub horizons: Vec<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long, default_value = "dynamite")]
    pub method: Method,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Eigenvalue bound, or `oracle` to compute it exactly.
    #[arg(long, default_value = "oracle")]
    pub lambda: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EdgeOrderArg {
    Input,
    Shuffled,
}

#[derive(Clone, Debug, Args)]
pub struct CountArgs {
    /// Graph JSON `{"n": .., "edges": [[u, v], ...]}`.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub k: u16,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.25)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "dynamite")]
    pub estimator: EstimatorArg,
    /// `heuristic`, `exact`, or a numeric bound for Glauber dynamics.
    #[arg(long, default_value = "heuristic")]
    pub lambda: String,
    #[arg(long, value_enum, default_value = "input")]
    pub edge_order: EdgeOrderArg,
    /// Also count by brute force and report the relative error.
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Dynamite,
    StaticHoeffding,
}

#[derive(Clone, Debug, Args)]
pub struct PlantedArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub q: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Graph JSON path; the sidecar goes next to it as `<stem>.partition.json`.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated list from `cycle-f<i>`, `cycle-fhalf`, `planted-count`.
    #[arg(long, default_value = "cycle-f1,cycle-fhalf,planted-count")]
    pub problems: String,
    /// Comma-separated methods, or `all`.
    #[arg(long, default_value = "all")]
    pub methods: String,
    /// Cycle length for cycle problems.
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub batches: usize,
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0.02)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.25)]
    pub count_epsilon: f64,
    #[arg(long, default_value_t = 0.25)]
    pub count_delta: f64,
    #[arg(long, default_value_t = 6)]
    pub planted_n: usize,
    #[arg(long, default_value_t = 2)]
    pub planted_r: usize,
    #[arg(long, default_value_t = 0.6)]
    pub planted_p: f64,
    #[arg(long, default_value_t = 0.2)]
    pub planted_q: f64,
    /// Colors for the planted problem; defaults to max degree + 2.
    #[arg(long)]
    pub planted_k: Option<u16>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn check_unit(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {value}")))
    }
}

/// Result of `analyze-chain`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub chain: String,
    pub states: usize,
    pub lazy: bool,
    pub summary: SpectralSummary,
    pub profile: Vec<ProfilePoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub horizon: usize,
    pub trace_variance: f64,
    /// `v_π / T`.
    pub lower: f64,
    /// `2 τ_rel v_π / T`.
    pub upper: f64,
    /// Present for lazy reversible chains.
    pub sandwich_holds: Option<bool>,
}

pub fn cmd_analyze_chain(args: &AnalyzeArgs) -> Result<AnalyzeReport> {
    if args.horizons.contains(&0) {
        return Err(Error::ZeroLength);
    }
    let problem = args.chain.build()?;
    let oracle = problem.oracle.as_ref().ok_or(Error::TooLarge {
        states: problem.kernel.len(),
        cap: DEFAULT_STATE_CAP,
    })?;
    let lazy = problem.kernel.matrix().is_lazy();
    let summary = oracle.summary(&problem.f);
    let profile = args
        .horizons
        .iter()
        .map(|&t| {
            let v = oracle.trace_variance(&problem.f, t)?.trace_variance;
            let sandwich = if lazy && oracle.is_reversible() {
                Some(oracle.sandwich(&problem.f, t)?.holds)
            } else {
                None
            };
            Ok(ProfilePoint {
                horizon: t,
                trace_variance: v,
                lower: summary.variance / t as f64,
                upper: 2.0 * summary.relaxation_time * summary.variance / t as f64,
                sandwich_holds: sandwich,
            })
        })
        .collect::<Result<_>>()?;
    Ok(AnalyzeReport {
        chain: problem.name.clone(),
        states: problem.kernel.len(),
        lazy,
        summary,
        profile,
    })
}

/// Result of `estimate`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateOutput {
    pub chain: String,
    pub method: Method,
    pub epsilon: f64,
    pub delta: f64,
    pub lambda: f64,
    pub lambda_source: String,
    /// `E_π f`, when the stationary law is known.
    pub truth: f64,
    pub runs: Vec<ReplicateRun>,
    pub summary: EstimateSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicateRun {
    pub replicate: usize,
    pub covered: bool,
    pub report: EstimateReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateSummary {
    pub replicates: usize,
    pub covered: usize,
    pub coverage: f64,
    pub mean_estimate: f64,
    pub median_steps: u64,
    pub mean_steps: f64,
}

fn parse_lambda(text: &str, problem: &ChainProblem) -> Result<(f64, String)> {
    if text == "oracle" {
        let o = problem.oracle.as_ref().ok_or(Error::TooLarge {
            states: problem.kernel.len(),
            cap: DEFAULT_STATE_CAP,
        })?;
        return Ok((o.lambda(), "oracle".into()));
    }
    let value: f64 = text
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("--lambda expects `oracle` or a number, got `{text}`")))?;
    if !(0.0..1.0).contains(&value) {
        return Err(Error::InvalidLambda(value));
    }
    Ok((value, "explicit".into()))
}

pub fn cmd_estimate(args: &EstimateArgs) -> Result<EstimateOutput> {
    check_unit("epsilon", args.epsilon)?;
    check_unit("delta", args.delta)?;
    if args.replicates == 0 {
        return Err(Error::InvalidParameter("--replicates must be at least 1".into()));
    }
    let problem = args.chain.build()?;
    let (lambda, lambda_source) = parse_lambda(&args.lambda, &problem)?;
    let truth = problem.truth();
    let runs: Vec<ReplicateRun> = (0..args.replicates)
        .into_par_iter()
        .map(|i| {
            let seed = bench::replicate_seed(args.seed, i);
            let report = problem.run(args.method, lambda, args.epsilon, args.delta, seed)?;
            Ok(ReplicateRun {
                replicate: i,
                covered: (report.estimate - truth).abs() <= args.epsilon,
                report,
            })
        })
        .collect::<Result<_>>()?;
    let n = runs.len();
    let covered = runs.iter().filter(|r| r.covered).count();
    let mut steps: Vec<u64> = runs.iter().map(|r| r.report.total_steps).collect();
    let summary = EstimateSummary {
        replicates: n,
        covered,
        coverage: covered as f64 / n as f64,
        mean_estimate: runs.iter().map(|r| r.report.estimate).sum::<f64>() / n as f64,
        mean_steps: steps.iter().sum::<u64>() as f64 / n as f64,
        median_steps: bench::median(&mut steps),
    };
    Ok(EstimateOutput {
        chain: problem.name.clone(),
        method: args.method,
        epsilon: args.epsilon,
        delta: args.delta,
        lambda,
        lambda_source,
        truth,
        runs,
        summary,
    })
}

/// Result of `count-colorings`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountOutput {
    #[serde(flatten)]
    pub result: CountResult,
    /// Brute-force count when `--exact` was given and `k^n` is in range.
    pub exact_count: Option<u64>,
    pub relative_error: Option<f64>,
}

fn parse_policy(text: &str) -> Result<LambdaPolicy> {
    match text {
        "heuristic" => Ok(LambdaPolicy::Heuristic),
        "exact" | "oracle" => Ok(LambdaPolicy::Exact),
        other => other
            .parse()
            .map(LambdaPolicy::Fixed)
            .map_err(|_| Error::InvalidParameter(format!("unknown --lambda `{other}`"))),
    }
}

pub fn cmd_count_colorings(args: &CountArgs) -> Result<CountOutput> {
    check_unit("epsilon", args.epsilon)?;
    check_unit("delta", args.delta)?;
    let graph = Graph::from_json(&fs::read_to_string(&args.graph)?)?;
    let config = JvvConfig {
        estimator: match args.estimator {
            EstimatorArg::Dynamite => MeanEstimator::Dynamite,
            EstimatorArg::StaticHoeffding => MeanEstimator::StaticHoeffding,
        },
        lambda: parse_policy(&args.lambda)?,
        edge_order: match args.edge_order {
            EdgeOrderArg::Input => EdgeOrder::Input,
            EdgeOrderArg::Shuffled => EdgeOrder::Shuffled(args.seed),
        },
        seed: args.seed,
    };
    let result = jvv_count(&graph, args.k, args.epsilon, args.delta, &config)?;
    let exact_count = if args.exact {
        brute_force_count(&graph, args.k).ok()
    } else {
        None
    };
    let relative_error = exact_count.map(|c| (result.estimate / c as f64 - 1.0).abs());
    Ok(CountOutput {
        result,
        exact_count,
        relative_error,
    })
}

/// Sidecar written next to a generated graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionSidecar {
    pub communities: Vec<usize>,
    pub params: PlantedParams,
}

/// Writes the graph and its sidecar; returns both paths.
pub fn cmd_gen_planted(args: &PlantedArgs) -> Result<(PathBuf, PathBuf)> {
    let params = PlantedParams::new(args.n, args.r, args.p, args.q, args.seed)?;
    let pg = generate(&params)?;
    let graph_path = match &args.output {
        Some(p) => p.clone(),
        None => default_dir().join("planted.json"),
    };
    let sidecar_path = sidecar_path(&graph_path);
    write_file(&graph_path, &pg.graph.to_json()?)?;
    let sidecar = PartitionSidecar {
        communities: pg.communities,
        params,
    };
    write_file(&sidecar_path, &serde_json::to_string(&sidecar)?)?;
    Ok((graph_path, sidecar_path))
}

pub fn sidecar_path(graph_path: &Path) -> PathBuf {
    let stem = graph_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "planted".into());
    graph_path.with_file_name(format!("{stem}.partition.json"))
}

pub fn bench_config(args: &BenchArgs) -> Result<BenchConfig> {
    check_unit("epsilon", args.epsilon)?;
    check_unit("delta", args.delta)?;
    check_unit("count-epsilon", args.count_epsilon)?;
    check_unit("count-delta", args.count_delta)?;
    let planted = PlantedParams::new(
        args.planted_n,
        args.planted_r,
        args.planted_p,
        args.planted_q,
        args.seed,
    )?;
    let k = match args.planted_k {
        Some(k) => k,
        None => (generate(&planted)?.graph.max_degree() + 2) as u16,
    };
    let problems = args
        .problems
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| BenchProblem::parse(name, args.n, planted, k))
        .collect::<Result<_>>()?;
    let methods = if args.methods.trim() == "all" {
        Method::COMPARED.to_vec()
    } else {
        args.methods
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?
    };
    Ok(BenchConfig {
        problems,
        methods,
        batches: args.batches,
        replicates: args.replicates,
        epsilon: args.epsilon,
        delta: args.delta,
        count_epsilon: args.count_epsilon,
        count_delta: args.count_delta,
        seed: args.seed,
    })
}

pub fn cmd_bench_compare(args: &BenchArgs) -> Result<String> {
    let rows = bench::compare(&bench_config(args)?)?;
    let mut out = Vec::new();
    bench::write_csv(&rows, &mut out)?;
    Ok(String::from_utf8(out).expect("csv output is utf-8"))
}

fn default_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text)?;
    Ok(())
}

/// Writes to `output`, else to the default directory when the environment
/// names one, else returns the text for stdout.
fn deliver(text: String, output: &Option<PathBuf>, default_name: &str) -> Result<Option<String>> {
    let path = match output {
        Some(p) => Some(p.clone()),
        None => std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join(default_name)),
    };
    match path {
        Some(p) => {
            write_file(&p, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

/// Runs a parsed command. Returns text destined for stdout, if any.
pub fn run(cli: &Cli) -> Result<Option<String>> {
    match &cli.command {
        Command::AnalyzeChain(a) => {
            let json = serde_json::to_string_pretty(&cmd_analyze_chain(a)?)?;
            deliver(json + "\n", &a.output, "analyze-chain.json")
        }
        Command::Estimate(a) => {
            let json = serde_json::to_string_pretty(&cmd_estimate(a)?)?;
            deliver(json + "\n", &a.output, "estimate.json")
        }
        Command::CountColorings(a) => {
            let json = serde_json::to_string_pretty(&cmd_count_colorings(a)?)?;
            deliver(json + "\n", &a.output, "count-colorings.json")
        }
        Command::GenPlanted(a) => {
            let (graph, sidecar) = cmd_gen_planted(a)?;
            Ok(Some(format!("{}\n{}\n", graph.display(), sidecar.display())))
        }
        Command::BenchCompare(a) => deliver(cmd_bench_compare(a)?, &a.output, "bench.csv"),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
fn usage_for(args: &[std::ffi::OsString]) -> String {
    let mut command = Cli::command();
    let name = args.get(1).and_then(|a| a.to_str()).unwrap_or_default();
    match command.find_subcommand_mut(name) {
        Some(sub) => sub.render_usage().to_string().replace("Usage: ", "Usage: dynamite "),
        None => command.render_usage().to_string(),
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return EXIT_OK;
            }
            let rendered = e.render().to_string();
            eprint!("{rendered}");
            if !rendered.contains("Usage:") {
                eprintln!("\n{}", usage_for(&args));
            }
            return EXIT_CONFIG;
        }
    };
    match run(&cli) {
        Ok(Some(text)) => {
            print!("{text}");
            EXIT_OK
        }
        Ok(None) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("dynamite").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn analyze_cycle() {
        let Command::AnalyzeChain(a) = parse(&["analyze-chain", "--n", "8", "--i", "1", "--T", "1,64"]).command
        else {
            panic!()
        };
        let r = cmd_analyze_chain(&a).unwrap();
        assert!((r.summary.variance - 0.25).abs() < 1e-12);
        assert!((r.profile[0].trace_variance - 0.25).abs() < 1e-12);
        assert_eq!(r.profile[1].horizon, 64);
        assert_eq!(r.profile[1].sandwich_holds, Some(true));
    }

    #[test]
    fn malformed_flags_are_config_errors() {
        assert_eq!(main_with_args(["dynamite", "analyze-chain", "--n", "x"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["dynamite", "no-such-command"]), EXIT_CONFIG);
        assert_eq!(
            main_with_args(["dynamite", "estimate", "--epsilon", "1.5"]),
            EXIT_CONFIG
        );
    }

    #[test]
    fn oversize_chain_is_a_guard_rejection() {
        assert_eq!(
            main_with_args(["dynamite", "analyze-chain", "--chain", "uniform", "--n", "5000", "--fn", "indicator", "--states", "0"]),
            EXIT_GUARD
        );
    }

    #[test]
    fn sidecar_names() {
        assert_eq!(sidecar_path(Path::new("out/g.json")), PathBuf::from("out/g.partition.json"));
    }

    #[test]
    fn lambda_parsing() {
        assert_eq!(parse_policy("heuristic").unwrap(), LambdaPolicy::Heuristic);
        assert_eq!(parse_policy("0.9").unwrap(), LambdaPolicy::Fixed(0.9));
        assert!(parse_policy("fast").is_err());
    }
}
