//! Mean and variance estimators and the concentration bounds behind them.
//!
//! The two-chain variance estimator pairs samples from two independent
//! stationary traces, `v̂ = (1/2m) Σ (f(X_{1,i}) - f(X_{2,i}))²`, which is
//! unbiased for the stationary variance without any Bessel-type correction.
//! Bound helpers take the per-bound failure budget `δ'` directly; the log
//! term is `L = ln(1/δ')`.

use serde::Serialize;

use crate::chain::{run_trace_with, Kernel, ScalarFunction};
use crate::error::{Error, Result};

/// `(11 + √21)`, the leading constant of the variance upper bound.
pub fn variance_bound_constant() -> f64 {
    11.0 + 21f64.sqrt()
}

/// Function values along two independent traces, sample by sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairedEvaluations {
    first: Vec<f64>,
    second: Vec<f64>,
    lower: f64,
    upper: f64,
    streams: [u64; 2],
}

impl PairedEvaluations {
    /// Empty pair for values in `[lower, upper]` drawn from the two named
    /// streams, which must differ.
    pub fn new(lower: f64, upper: f64, streams: [u64; 2]) -> Result<Self> {
        if streams[0] == streams[1] {
            return Err(Error::SharedStream(streams[0]));
        }
        if !(lower <= upper) {
            return Err(Error::InvalidRange { lower, upper });
        }
        Ok(Self {
            first: Vec::new(),
            second: Vec::new(),
            lower,
            upper,
            streams,
        })
    }

    pub fn from_sequences(
        first: Vec<f64>,
        second: Vec<f64>,
        lower: f64,
        upper: f64,
        streams: [u64; 2],
    ) -> Result<Self> {
        if first.len() != second.len() {
            return Err(Error::LengthMismatch {
                first: first.len(),
                second: second.len(),
            });
        }
        let mut out = Self::new(lower, upper, streams)?;
        out.first.reserve(first.len());
        out.second.reserve(first.len());
        for (a, b) in first.into_iter().zip(second) {
            out.push(a, b)?;
        }
        Ok(out)
    }

    pub fn push(&mut self, a: f64, b: f64) -> Result<()> {
        for value in [a, b] {
            if !(value >= self.lower && value <= self.upper) {
                return Err(Error::ValueOutOfRange {
                    value,
                    lower: self.lower,
                    upper: self.upper,
                });
            }
        }
        self.first.push(a);
        self.second.push(b);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    pub fn span(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn first(&self) -> &[f64] {
        &self.first
    }

    pub fn second(&self) -> &[f64] {
        &self.second
    }
}

/// `μ̂ = (1/2m) Σ (f(x_i) + f(y_i))`.
pub fn empirical_mean(paired: &PairedEvaluations) -> Result<f64> {
    if paired.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sum: f64 = paired.first.iter().zip(&paired.second).map(|(a, b)| a + b).sum();
    Ok((sum / (2 * paired.len()) as f64).clamp(paired.lower, paired.upper))
}

/// `v̂ = (1/2m) Σ (f(x_i) - f(y_i))²`.
pub fn two_chain_variance(paired: &PairedEvaluations) -> Result<f64> {
    if paired.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sum: f64 = paired
        .first
        .iter()
        .zip(&paired.second)
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    Ok(sum / (2 * paired.len()) as f64)
}

/// Inputs shared by the concentration bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConcentrationParams {
    /// Upper bound on the second absolute eigenvalue.
    pub lambda: f64,
    /// Range `R = b - a` of the function.
    pub range: f64,
    /// Failure budget of one bound.
    pub delta: f64,
    /// Sample count.
    pub samples: u64,
}

impl ConcentrationParams {
    pub fn new(lambda: f64, range: f64, delta: f64, samples: u64) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(Error::InvalidLambda(lambda));
        }
        if !(range >= 0.0) {
            return Err(Error::InvalidParameter(format!("range must be >= 0, got {range}")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidDelta(delta));
        }
        if samples == 0 {
            return Err(Error::ZeroLength);
        }
        Ok(Self {
            lambda,
            range,
            delta,
            samples,
        })
    }

    /// `L / ((1 - Λ) m)` with `L = ln(1/δ')`.
    fn log_rate(&self) -> f64 {
        (1.0 / self.delta).ln() / ((1.0 - self.lambda) * self.samples as f64)
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveEpsilon(epsilon))
    }
}

/// Hoeffding sample size for mixing processes,
/// `⌈((1+λ)/(1-λ)) ln(2/δ) R² / (2ε²)⌉`. `params.samples` is ignored.
pub fn hoeffding_sample_complexity(params: &ConcentrationParams, epsilon: f64) -> Result<u64> {
    check_epsilon(epsilon)?;
    let l = params.lambda;
    let m = (1.0 + l) / (1.0 - l) * (2.0 / params.delta).ln() * params.range.powi(2)
        / (2.0 * epsilon * epsilon);
    Ok(ceil_count(m))
}

/// Bernstein sample size for a chain with stationary variance `v`,
/// `⌈(2/(1-λ)) ln(2/δ) (5R/ε + (1+λ) v / ε²)⌉`. `params.samples` is ignored.
pub fn bernstein_sample_complexity(
    params: &ConcentrationParams,
    variance: f64,
    epsilon: f64,
) -> Result<u64> {
    check_epsilon(epsilon)?;
    if !(variance >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "variance must be >= 0, got {variance}"
        )));
    }
    let l = params.lambda;
    let m = 2.0 / (1.0 - l)
        * (2.0 / params.delta).ln()
        * (5.0 * params.range / epsilon + (1.0 + l) * variance / (epsilon * epsilon));
    Ok(ceil_count(m))
}

// Guards against 2.0000000000000004 ceiling to 3.
fn ceil_count(x: f64) -> u64 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as u64
    } else {
        x.ceil() as u64
    }
}

/// High-probability upper bound on the variance given the estimate `v̂`:
///
/// ```text
/// u = v̂ + (11+√21)(1 + Λ/√21) R² L / ((1-Λ) m) + √((1+Λ) R² v̂ L / ((1-Λ) m))
/// ```
pub fn variance_upper_bound(estimate: f64, params: &ConcentrationParams) -> f64 {
    let l = params.lambda;
    let r2 = params.range.powi(2);
    let rate = params.log_rate();
    let v = estimate.max(0.0);
    v + variance_bound_constant() * (1.0 + l / 21f64.sqrt()) * r2 * rate
        + ((1.0 + l) * r2 * v * rate).sqrt()
}

/// Bernstein confidence radius for a variance bound `u`:
/// `ε̂ = 10 R L / ((1-Λ) m) + √((1+Λ) u L / ((1-Λ) m))`.
pub fn bernstein_radius(bound: f64, params: &ConcentrationParams) -> f64 {
    let rate = params.log_rate();
    10.0 * params.range * rate + ((1.0 + params.lambda) * bound.max(0.0) * rate).sqrt()
}

/// Classic fixed-size estimator: the mean of `f` over one trace of `m` steps
/// started at `start` (the start itself is not counted).
pub fn static_estimate<K, R>(
    kernel: &K,
    f: &ScalarFunction<K::State>,
    samples: usize,
    start: &K::State,
    rng: &mut R,
) -> Result<f64>
where
    K: Kernel,
    R: rand::Rng + ?Sized,
{
    let trace = run_trace_with(kernel, start, samples, rng)?;
    let sum: f64 = trace.iter().map(|s| f.eval(s)).sum();
    Ok((sum / samples as f64).clamp(f.lower(), f.upper()))
}
