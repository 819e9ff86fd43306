//! Adaptive mean estimation.
//!
//! [`mcmc_pro`] runs two independent copies of a chain under a doubling
//! schedule `m_i = ⌈α 2^i⌉`, and after every round computes the empirical
//! mean, the two-chain variance estimate, a high-probability upper bound on
//! the variance and the resulting Bernstein radius. It stops as soon as the
//! radius drops to `ε`, or after the last round of the schedule.
//!
//! [`dynamite`] applies [`mcmc_pro`] to the trace chain of length
//! `T = ⌈((1+Λ)/(1-Λ)) ln √2⌉` with the trace average of `f`, so sample
//! consumption follows the inter-trace variance `v_T` rather than the
//! stationary variance. [`warm_start`] removes the stationary-start
//! assumption by first running the product chain for the uniform mixing
//! time bound.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::chain::{lift_to_trace_average, tensor_product, trace_chain, Kernel, ScalarFunction};
use crate::error::{Error, Result};
use crate::estimators::{
    bernstein_radius, empirical_mean, two_chain_variance, variance_upper_bound,
    ConcentrationParams, PairedEvaluations,
};
use crate::rng::{self, label};

/// Doubling sample schedule.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Schedule {
    /// Number of rounds `I = max(1, ⌊log₂(R / 2ε)⌋)`.
    pub iterations: usize,
    /// `α = (1+Λ) R ln(3I/δ) / ((1-Λ) ε)`.
    pub alpha: f64,
    /// `m_1 .. m_I`, cumulative sample counts.
    pub sizes: Vec<u64>,
    /// Failure budget of each of the `3I` tail bounds, `δ / (3I)`.
    pub bound_delta: f64,
}

impl Schedule {
    pub fn last(&self) -> u64 {
        *self.sizes.last().expect("schedules have at least one round")
    }
}

fn check_inputs(epsilon: f64, delta: f64, lambda: f64) -> Result<()> {
    if !(epsilon > 0.0) {
        return Err(Error::NonPositiveEpsilon(epsilon));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidDelta(delta));
    }
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::InvalidLambda(lambda));
    }
    Ok(())
}

pub fn build_schedule(range: f64, epsilon: f64, lambda: f64, delta: f64) -> Result<Schedule> {
    check_inputs(epsilon, delta, lambda)?;
    if !(range >= 0.0) {
        return Err(Error::InvalidParameter(format!("range must be >= 0, got {range}")));
    }
    let ratio = range / (2.0 * epsilon);
    let iterations = if ratio > 0.0 {
        (ratio.log2().floor() as i64).max(1) as usize
    } else {
        1
    };
    let bound_delta = delta / (3 * iterations) as f64;
    let alpha = (1.0 + lambda) * range * (1.0 / bound_delta).ln() / ((1.0 - lambda) * epsilon);
    let sizes = (1..=iterations)
        .map(|i| (alpha * 2f64.powi(i as i32)).ceil() as u64)
        .collect();
    Ok(Schedule {
        iterations,
        alpha,
        sizes,
        bound_delta,
    })
}

/// One round of the progressive loop.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub samples: u64,
    pub mean: f64,
    pub variance: f64,
    pub variance_bound: f64,
    pub radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    RadiusMet,
    ScheduleExhausted,
    DegenerateRange,
    /// A single run with a precomputed sample count.
    FixedBudget,
}

/// Audit trail of one adaptive estimation run.
#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub estimate: f64,
    pub iterations: Vec<IterationRecord>,
    pub schedule: Option<Schedule>,
    /// Length of each trace-chain state (1 when running on the base chain).
    pub trace_length: usize,
    /// Steps of the chain the progressive loop ran on, both copies.
    pub chain_steps: u64,
    pub warmup_steps: u64,
    /// Base-chain steps: `trace_length * chain_steps + warmup_steps`.
    pub total_steps: u64,
    /// Eigenvalue bound handed to the progressive loop.
    pub lambda_bound: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub termination: Termination,
    pub seed: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

// Wall-clock time is not part of a run's outcome.
impl PartialEq for EstimateReport {
    fn eq(&self, other: &Self) -> bool {
        self.estimate == other.estimate
            && self.iterations == other.iterations
            && self.schedule == other.schedule
            && self.trace_length == other.trace_length
            && self.chain_steps == other.chain_steps
            && self.warmup_steps == other.warmup_steps
            && self.total_steps == other.total_steps
            && self.lambda_bound == other.lambda_bound
            && self.epsilon == other.epsilon
            && self.delta == other.delta
            && self.termination == other.termination
            && self.seed == other.seed
    }
}

impl EstimateReport {
    fn degenerate(value: f64, lambda: f64, epsilon: f64, delta: f64, seed: u64) -> Self {
        Self {
            estimate: value,
            iterations: Vec::new(),
            schedule: None,
            trace_length: 1,
            chain_steps: 0,
            warmup_steps: 0,
            total_steps: 0,
            lambda_bound: lambda,
            epsilon,
            delta,
            termination: Termination::DegenerateRange,
            seed,
            elapsed: Duration::ZERO,
        }
    }
}

/// Progressive two-chain estimation on `kernel`.
///
/// `initial` must be distributed as two independent stationary draws; the
/// initial pair itself never enters the estimate. Chains are extended across
/// rounds, never restarted, so the cost is `2 m_I` at most.
pub fn mcmc_pro<K: Kernel>(
    kernel: &K,
    initial: (K::State, K::State),
    lambda: f64,
    f: &ScalarFunction<K::State>,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<EstimateReport> {
    let started = Instant::now();
    check_inputs(epsilon, delta, lambda)?;
    let range = f.span();
    if range == 0.0 {
        return Ok(EstimateReport::degenerate(f.lower(), lambda, epsilon, delta, seed));
    }
    let product = tensor_product(kernel);
    product.check_state(&initial)?;
    let schedule = build_schedule(range, epsilon, lambda, delta)?;

    let seeds = [
        rng::derive_seed(seed, label::CHAIN_A),
        rng::derive_seed(seed, label::CHAIN_B),
    ];
    let (mut rng_a, mut rng_b) = (rng::stream(seeds[0]), rng::stream(seeds[1]));
    let mut values = PairedEvaluations::new(f.lower(), f.upper(), seeds)?;
    let mut state = initial;
    let mut iterations = Vec::with_capacity(schedule.iterations);
    let mut termination = Termination::ScheduleExhausted;

    for (round, &target) in schedule.sizes.iter().enumerate() {
        while (values.len() as u64) < target {
            product.step_pair(&mut state, &mut rng_a, &mut rng_b);
            values.push(f.eval(&state.0), f.eval(&state.1))?;
        }
        let params = ConcentrationParams::new(lambda, range, schedule.bound_delta, target)?;
        let mean = empirical_mean(&values)?;
        let variance = two_chain_variance(&values)?;
        let variance_bound = variance_upper_bound(variance, &params);
        let radius = bernstein_radius(variance_bound, &params);
        iterations.push(IterationRecord {
            iteration: round + 1,
            samples: target,
            mean,
            variance,
            variance_bound,
            radius,
        });
        if radius <= epsilon {
            termination = Termination::RadiusMet;
            break;
        }
    }

    let last = iterations.last().expect("at least one round");
    let chain_steps = 2 * last.samples;
    Ok(EstimateReport {
        estimate: last.mean,
        iterations,
        schedule: Some(schedule),
        trace_length: 1,
        chain_steps,
        warmup_steps: 0,
        total_steps: chain_steps,
        lambda_bound: lambda,
        epsilon,
        delta,
        termination,
        seed,
        elapsed: started.elapsed(),
    })
}

/// Trace length making the trace chain's relaxation time at most 2.
pub fn trace_length_for(lambda: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::InvalidLambda(lambda));
    }
    let t = ((1.0 + lambda) / (1.0 - lambda) * 2f64.sqrt().ln()).ceil();
    Ok((t as usize).max(1))
}

/// Runs [`mcmc_pro`] on the trace chain of a lazy kernel with the trace
/// average of `f` and eigenvalue bound `Λ^T`.
///
/// `initial` must be two independent stationary draws of the base chain.
pub fn dynamite<K>(
    kernel: &K,
    initial: (K::State, K::State),
    lambda: f64,
    f: &ScalarFunction<K::State>,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<EstimateReport>
where
    K: Kernel,
    K::State: 'static,
{
    check_inputs(epsilon, delta, lambda)?;
    if !kernel.meta().lazy {
        return Err(Error::InvalidParameter(
            "adaptive trace estimation needs a lazy kernel; wrap it with `lazify`".into(),
        ));
    }
    let length = trace_length_for(lambda)?;
    let chain = trace_chain(kernel, length)?;
    let averaged = lift_to_trace_average(f, length)?;
    let start = (chain.padded_state(&initial.0), chain.padded_state(&initial.1));
    let mut report = mcmc_pro(
        &chain,
        start,
        lambda.powi(length as i32),
        &averaged,
        epsilon,
        delta,
        seed,
    )?;
    report.trace_length = length;
    report.total_steps = report.chain_steps * length as u64 + report.warmup_steps;
    Ok(report)
}

/// `⌈ln(1/π_min) / ln(1/Λ)⌉`, zero when `Λ = 0` or `π_min = 1`.
pub fn uniform_mixing_steps(lambda: f64, pi_min: f64) -> Result<u64> {
    if !(pi_min > 0.0 && pi_min <= 1.0) {
        return Err(Error::InvalidPiMin(pi_min));
    }
    uniform_mixing_steps_log(lambda, -pi_min.ln())
}

/// [`uniform_mixing_steps`] taking `ln(1/π_min)`, for state spaces whose
/// `π_min` underflows.
pub fn uniform_mixing_steps_log(lambda: f64, ln_inv_pi_min: f64) -> Result<u64> {
    if !(ln_inv_pi_min >= 0.0 && ln_inv_pi_min.is_finite()) {
        return Err(Error::InvalidPiMin((-ln_inv_pi_min).exp()));
    }
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::InvalidLambda(lambda));
    }
    if lambda == 0.0 || ln_inv_pi_min == 0.0 {
        return Ok(0);
    }
    let steps = ln_inv_pi_min / (1.0 / lambda).ln();
    // Exact ratios such as ln 1024 / ln 2 should not round up to 11.
    let nearest = steps.round();
    Ok(if (steps - nearest).abs() < 1e-9 {
        nearest as u64
    } else {
        steps.ceil() as u64
    })
}

/// Starts both copies at `start`, advances the product chain for the
/// uniform mixing time bound, then runs [`dynamite`] with failure budget
/// `δ/4`.
#[allow(clippy::too_many_arguments)]
pub fn warm_start<K>(
    start: &K::State,
    kernel: &K,
    lambda: f64,
    pi_min: f64,
    f: &ScalarFunction<K::State>,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<EstimateReport>
where
    K: Kernel,
    K::State: 'static,
{
    if !(pi_min > 0.0 && pi_min <= 1.0) {
        return Err(Error::InvalidPiMin(pi_min));
    }
    warm_start_log(start, kernel, lambda, -pi_min.ln(), f, epsilon, delta, seed)
}

/// [`warm_start`] taking `ln(1/π_min)`.
#[allow(clippy::too_many_arguments)]
pub fn warm_start_log<K>(
    start: &K::State,
    kernel: &K,
    lambda: f64,
    ln_inv_pi_min: f64,
    f: &ScalarFunction<K::State>,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<EstimateReport>
where
    K: Kernel,
    K::State: 'static,
{
    let started = Instant::now();
    check_inputs(epsilon, delta, lambda)?;
    let meta = kernel.meta();
    if !meta.lazy || !meta.reversible {
        return Err(Error::InvalidParameter(
            "warm start needs a lazy reversible kernel".into(),
        ));
    }
    kernel.check_state(start)?;
    let warmup = uniform_mixing_steps_log(lambda, ln_inv_pi_min)?;
    let product = tensor_product(kernel);
    let mut warm_rng = rng::stream(rng::derive_seed(seed, label::WARM_UP));
    let mut pair = (start.clone(), start.clone());
    for _ in 0..warmup {
        product.step(&mut pair, &mut warm_rng);
    }
    let mut report = dynamite(kernel, pair, lambda, f, epsilon, delta / 4.0, seed)?;
    report.warmup_steps = 2 * warmup;
    report.total_steps += report.warmup_steps;
    report.delta = delta;
    report.elapsed = started.elapsed();
    Ok(report)
}

/// Fixed-size single-chain estimate: `warmup` steps from `start`, then the
/// mean of `f` over the next `samples` states.
///
/// The record's `variance` is the empirical variance of the visited values,
/// `variance_bound` is the caller's variance proxy, and `radius` is `ε`.
#[allow(clippy::too_many_arguments)]
pub fn fixed_budget<K: Kernel>(
    kernel: &K,
    start: &K::State,
    samples: u64,
    warmup: u64,
    lambda: f64,
    f: &ScalarFunction<K::State>,
    epsilon: f64,
    delta: f64,
    variance_proxy: f64,
    seed: u64,
) -> Result<EstimateReport> {
    let started = Instant::now();
    check_inputs(epsilon, delta, lambda)?;
    if samples == 0 {
        return Err(Error::ZeroLength);
    }
    kernel.check_state(start)?;
    let mut state = start.clone();
    let mut warm_rng = rng::stream(rng::derive_seed(seed, label::WARM_UP));
    for _ in 0..warmup {
        kernel.step(&mut state, &mut warm_rng);
    }
    let mut chain_rng = rng::stream(rng::derive_seed(seed, label::CHAIN_A));
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        kernel.step(&mut state, &mut chain_rng);
        let x = f.eval(&state);
        sum += x;
        sum_sq += x * x;
    }
    let m = samples as f64;
    let mean = (sum / m).clamp(f.lower(), f.upper());
    let variance = (sum_sq / m - mean * mean).max(0.0);
    Ok(EstimateReport {
        estimate: mean,
        iterations: vec![IterationRecord {
            iteration: 1,
            samples,
            mean,
            variance,
            variance_bound: variance_proxy,
            radius: epsilon,
        }],
        schedule: None,
        trace_length: 1,
        chain_steps: samples,
        warmup_steps: warmup,
        total_steps: samples + warmup,
        lambda_bound: lambda,
        epsilon,
        delta,
        termination: Termination::FixedBudget,
        seed,
        elapsed: started.elapsed(),
    })
}
