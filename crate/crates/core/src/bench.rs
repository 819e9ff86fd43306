//! Estimation methods over explicit chains and the method comparison
//! harness behind `bench-compare`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{make_cycle, make_cycle_function, sample_index, Kernel, MatrixKernel, ScalarFunction};
use crate::coloring::{brute_force_count, jvv_count, JvvConfig, MeanEstimator};
use crate::dynamite::{self, dynamite, mcmc_pro, warm_start, EstimateReport};
use crate::error::{Error, Result};
use crate::estimators::{bernstein_sample_complexity, hoeffding_sample_complexity, ConcentrationParams};
use crate::planted::{generate, PlantedParams};
use crate::rng::{self, label};
use crate::spectral::{SpectralOracle, DEFAULT_STATE_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Dynamite,
    McmcPro,
    WarmStart,
    StaticHoeffding,
    StaticBernstein,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Dynamite,
        Method::McmcPro,
        Method::WarmStart,
        Method::StaticHoeffding,
        Method::StaticBernstein,
    ];

    /// Methods compared by default in `bench-compare`.
    pub const COMPARED: [Method; 4] = [
        Method::Dynamite,
        Method::McmcPro,
        Method::StaticHoeffding,
        Method::StaticBernstein,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Dynamite => "dynamite",
            Method::McmcPro => "mcmc-pro",
            Method::WarmStart => "warm-start",
            Method::StaticHoeffding => "static-hoeffding",
            Method::StaticBernstein => "static-bernstein",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method `{s}`")))
    }
}

/// An explicit chain, a function on it, and whatever exact data is
/// available.
#[derive(Clone, Debug)]
pub struct ChainProblem {
    pub name: String,
    pub kernel: MatrixKernel,
    pub f: ScalarFunction<usize>,
    pub stationary: Vec<f64>,
    pub oracle: Option<SpectralOracle>,
}

impl ChainProblem {
    /// Builds the oracle when the chain is within the dense cap. Larger
    /// chains must be doubly stochastic so the uniform law is stationary.
    pub fn new(name: impl Into<String>, kernel: MatrixKernel, f: ScalarFunction<usize>) -> Result<Self> {
        let oracle = if kernel.len() <= DEFAULT_STATE_CAP {
            Some(SpectralOracle::new(kernel.matrix())?)
        } else {
            None
        };
        let stationary = match &oracle {
            Some(o) => o.stationary().to_vec(),
            None => {
                let m = kernel.matrix().as_dmatrix();
                let doubly = m
                    .column_iter()
                    .all(|c| (c.sum() - 1.0).abs() < 1e-9);
                if !doubly {
                    return Err(Error::TooLarge {
                        states: kernel.len(),
                        cap: DEFAULT_STATE_CAP,
                    });
                }
                vec![1.0 / kernel.len() as f64; kernel.len()]
            }
        };
        Ok(Self {
            name: name.into(),
            kernel,
            f,
            stationary,
            oracle,
        })
    }

    /// Cycle of length `n` with the block function of half-width `i`.
    pub fn cycle(n: usize, i: usize) -> Result<Self> {
        Self::new(format!("cycle{n}-f{i}"), make_cycle(n)?, make_cycle_function(n, i)?)
    }

    /// `E_π f`.
    pub fn truth(&self) -> f64 {
        let values = self.f.values(self.kernel.len());
        self.stationary.iter().zip(&values).map(|(p, v)| p * v).sum()
    }

    /// Exact second eigenvalue, or the kernel's declared bound.
    pub fn oracle_lambda(&self) -> Result<f64> {
        match (&self.oracle, self.kernel.meta().lambda) {
            (Some(o), _) => Ok(o.lambda()),
            (None, Some(l)) => Ok(l),
            (None, None) => Err(Error::TooLarge {
                states: self.kernel.len(),
                cap: DEFAULT_STATE_CAP,
            }),
        }
    }

    pub fn pi_min(&self) -> f64 {
        self.stationary
            .iter()
            .copied()
            .filter(|&p| p > 0.0)
            .fold(1.0, f64::min)
    }

    /// Two independent stationary draws from the `start` stream of `seed`.
    pub fn stationary_pair(&self, seed: u64) -> (usize, usize) {
        let mut r = rng::stream(rng::derive_seed(seed, label::START));
        (
            sample_index(&self.stationary, &mut r),
            sample_index(&self.stationary, &mut r),
        )
    }

    /// Runs one estimation with `method`.
    ///
    /// Stationary-start methods draw their starts from the `start` stream;
    /// warm start begins at the state of smallest stationary mass.
    pub fn run(&self, method: Method, lambda: f64, epsilon: f64, delta: f64, seed: u64) -> Result<EstimateReport> {
        let (a, b) = self.stationary_pair(seed);
        let k = &self.kernel;
        let f = &self.f;
        match method {
            Method::Dynamite => dynamite(k, (a, b), lambda, f, epsilon, delta, seed),
            Method::McmcPro => mcmc_pro(k, (a, b), lambda, f, epsilon, delta, seed),
            Method::WarmStart => {
                let pi_min = self.pi_min();
                let start = self
                    .stationary
                    .iter()
                    .position(|&p| p == pi_min)
                    .unwrap_or(0);
                warm_start(&start, k, lambda, pi_min, f, epsilon, delta, seed)
            }
            Method::StaticHoeffding => {
                let params = ConcentrationParams::new(lambda, f.span(), delta, 1)?;
                let m = hoeffding_sample_complexity(&params, epsilon)?.max(1);
                let proxy = f.span().powi(2) / 4.0;
                dynamite::fixed_budget(k, &a, m, 0, lambda, f, epsilon, delta, proxy, seed)
            }
            Method::StaticBernstein => {
                let oracle = self.oracle.as_ref().ok_or(Error::TooLarge {
                    states: k.len(),
                    cap: DEFAULT_STATE_CAP,
                })?;
                let v = oracle.variance(f);
                let params = ConcentrationParams::new(lambda, f.span(), delta, 1)?;
                let m = bernstein_sample_complexity(&params, v, epsilon)?.max(1);
                dynamite::fixed_budget(k, &a, m, 0, lambda, f, epsilon, delta, v, seed)
            }
        }
    }
}

/// One benchmark problem.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum BenchProblem {
    /// Cycle of length `n` with block half-width `half_width`.
    Cycle { n: usize, half_width: usize },
    /// Coloring count of a seeded planted-partition graph.
    PlantedCount { params: PlantedParams, k: u16 },
}

impl BenchProblem {
    /// Parses `cycle-f<i>`, `cycle-fhalf` or `planted-count`.
    pub fn parse(name: &str, cycle_n: usize, planted: PlantedParams, k: u16) -> Result<Self> {
        match name {
            "cycle-fhalf" => Ok(BenchProblem::Cycle {
                n: cycle_n,
                half_width: cycle_n / 2,
            }),
            "planted-count" => Ok(BenchProblem::PlantedCount { params: planted, k }),
            _ => name
                .strip_prefix("cycle-f")
                .and_then(|i| i.parse().ok())
                .map(|half_width| BenchProblem::Cycle {
                    n: cycle_n,
                    half_width,
                })
                .ok_or_else(|| Error::InvalidParameter(format!("unknown problem `{name}`"))),
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            BenchProblem::Cycle { n, half_width } => format!("cycle{n}-f{half_width}"),
            BenchProblem::PlantedCount { params, k } => format!(
                "planted-n{}-r{}-p{}-q{}-s{}-k{k}",
                params.n, params.r, params.p, params.q, params.seed
            ),
        }
    }

    /// Methods meaningful for this problem. Counting runs one mean
    /// estimate per edge from a greedy start, so only the methods with a
    /// warm-up are available.
    pub fn supports(&self, method: Method) -> bool {
        match self {
            BenchProblem::Cycle { .. } => true,
            BenchProblem::PlantedCount { .. } => {
                matches!(method, Method::Dynamite | Method::StaticHoeffding)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchConfig {
    pub problems: Vec<BenchProblem>,
    pub methods: Vec<Method>,
    pub batches: usize,
    pub replicates: usize,
    pub epsilon: f64,
    pub delta: f64,
    /// Accuracy and failure budget for counting problems.
    pub count_epsilon: f64,
    pub count_delta: f64,
    pub seed: u64,
}

/// CSV header, in column order.
pub const BENCH_COLUMNS: [&str; 11] = [
    "method",
    "problem",
    "batch",
    "replicates",
    "epsilon",
    "delta",
    "lambda",
    "steps",
    "mean_abs_error",
    "coverage",
    "wall_ms",
];

/// One `(method, problem, batch)` measurement.
///
/// `steps` is the median base-chain step count over the batch's replicates.
/// For counting problems the error is relative and a replicate is covered
/// when it lies within the run's reported relative error bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: String,
    pub problem: String,
    pub batch: usize,
    pub replicates: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub lambda: f64,
    pub steps: u64,
    pub mean_abs_error: f64,
    pub coverage: f64,
    pub wall_ms: f64,
}

struct Outcome {
    steps: u64,
    error: f64,
    covered: bool,
    lambda: f64,
}

pub fn batch_seed(master: u64, batch: usize) -> u64 {
    rng::derive_indexed(master, "batch", batch as u64)
}

pub fn replicate_seed(batch_seed: u64, replicate: usize) -> u64 {
    rng::derive_indexed(batch_seed, "replicate", replicate as u64)
}

pub fn median(values: &mut [u64]) -> u64 {
    values.sort_unstable();
    let n = values.len();
    if n == 0 {
        0
    } else if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2
    }
}

enum Prepared {
    Chain(ChainProblem, f64),
    Count(crate::coloring::Graph, u16, u64),
}

fn prepare(problem: &BenchProblem) -> Result<Prepared> {
    match problem {
        BenchProblem::Cycle { n, half_width } => {
            let p = ChainProblem::cycle(*n, *half_width)?;
            let lambda = p.oracle_lambda()?;
            Ok(Prepared::Chain(p, lambda))
        }
        BenchProblem::PlantedCount { params, k } => {
            let pg = generate(params)?;
            let exact = brute_force_count(&pg.graph, *k)?;
            Ok(Prepared::Count(pg.graph, *k, exact))
        }
    }
}

fn run_once(prepared: &Prepared, method: Method, config: &BenchConfig, seed: u64) -> Result<Outcome> {
    match prepared {
        Prepared::Chain(p, lambda) => {
            let r = p.run(method, *lambda, config.epsilon, config.delta, seed)?;
            let error = (r.estimate - p.truth()).abs();
            Ok(Outcome {
                steps: r.total_steps,
                error,
                covered: error <= config.epsilon,
                lambda: *lambda,
            })
        }
        Prepared::Count(graph, k, exact) => {
            let estimator = match method {
                Method::StaticHoeffding => MeanEstimator::StaticHoeffding,
                _ => MeanEstimator::Dynamite,
            };
            let r = jvv_count(
                graph,
                *k,
                config.count_epsilon,
                config.count_delta,
                &JvvConfig::new(estimator, seed),
            )?;
            let error = (r.estimate / *exact as f64 - 1.0).abs();
            Ok(Outcome {
                steps: r.total_steps,
                error,
                covered: error <= r.relative_error_bound,
                lambda: r.phases.first().map_or(0.0, |p| p.lambda_bound),
            })
        }
    }
}

/// Runs every supported `method × problem` pair for each batch. Rows are
/// ordered by problem, then method, then batch.
pub fn compare(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    if config.batches == 0 || config.replicates == 0 {
        return Err(Error::InvalidParameter(
            "batches and replicates must be at least 1".into(),
        ));
    }
    let mut rows = Vec::new();
    for problem in &config.problems {
        let prepared = prepare(problem)?;
        for &method in config.methods.iter().filter(|&&m| problem.supports(m)) {
            let batch_rows: Vec<BenchRow> = (0..config.batches)
                .into_par_iter()
                .map(|batch| {
                    let started = Instant::now();
                    let seed = batch_seed(config.seed, batch);
                    let outcomes = (0..config.replicates)
                        .map(|r| run_once(&prepared, method, config, replicate_seed(seed, r)))
                        .collect::<Result<Vec<_>>>()?;
                    let n = outcomes.len() as f64;
                    let mut steps: Vec<u64> = outcomes.iter().map(|o| o.steps).collect();
                    Ok(BenchRow {
                        method: method.name().to_string(),
                        problem: problem.descriptor(),
                        batch,
                        replicates: config.replicates,
                        epsilon: match problem {
                            BenchProblem::Cycle { .. } => config.epsilon,
                            BenchProblem::PlantedCount { .. } => config.count_epsilon,
                        },
                        delta: match problem {
                            BenchProblem::Cycle { .. } => config.delta,
                            BenchProblem::PlantedCount { .. } => config.count_delta,
                        },
                        lambda: outcomes[0].lambda,
                        steps: median(&mut steps),
                        mean_abs_error: outcomes.iter().map(|o| o.error).sum::<f64>() / n,
                        coverage: outcomes.iter().filter(|o| o.covered).count() as f64 / n,
                        wall_ms: started.elapsed().as_secs_f64() * 1e3,
                    })
                })
                .collect::<Result<_>>()?;
            rows.extend(batch_rows);
        }
    }
    Ok(rows)
}

/// Writes rows as CSV with a header row, even when `rows` is empty.
pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(BENCH_COLUMNS)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
