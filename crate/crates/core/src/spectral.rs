//! Exact dense analysis of small chains.
//!
//! Given an explicit transition matrix, [`SpectralOracle`] computes the
//! stationary distribution, the second absolute eigenvalue λ, the relaxation
//! time `1/(1-λ)`, lag autocovariances of a function at stationarity, and the
//! exact inter-trace variance
//!
//! ```text
//! v_T = v_π / T + (2 / T²) Σ_{i=1}^{T-1} (T - i) C_i
//! ```
//!
//! These values are the ground truth the estimators are tested against.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::chain::{make_cycle, make_cycle_function, ScalarFunction, TransitionMatrix};
use crate::error::{Error, Result};

/// Largest chain the dense routines accept by default.
pub const DEFAULT_STATE_CAP: usize = 4096;

const REVERSIBILITY_TOL: f64 = 1e-10;
const UNIT_TOL: f64 = 1e-9;
const SANDWICH_SLACK: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralSummary {
    pub stationary: Vec<f64>,
    /// Second absolute eigenvalue.
    pub lambda: f64,
    pub relaxation_time: f64,
    pub mean: f64,
    pub variance: f64,
    pub pi_min: f64,
    pub reversible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VarianceProfile {
    pub horizon: usize,
    /// `C_1 .. C_{T-1}`.
    pub autocovariances: Vec<f64>,
    pub trace_variance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichVerdict {
    pub horizon: usize,
    pub lower: f64,
    pub trace_variance: f64,
    pub upper: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationRow {
    pub half_width: usize,
    pub trace_variance: f64,
}

/// Precomputed stationary and spectral data of one explicit chain.
#[derive(Clone, Debug)]
pub struct SpectralOracle {
    matrix: TransitionMatrix,
    stationary: Vec<f64>,
    lambda: f64,
    reversible: bool,
}

impl SpectralOracle {
    pub fn new(matrix: &TransitionMatrix) -> Result<Self> {
        Self::with_cap(matrix, DEFAULT_STATE_CAP)
    }

    pub fn with_cap(matrix: &TransitionMatrix, cap: usize) -> Result<Self> {
        let n = matrix.len();
        if n > cap {
            return Err(Error::TooLarge { states: n, cap });
        }
        if n == 1 {
            return Err(Error::NotErgodic(
                "single-state chain has no second eigenvalue".into(),
            ));
        }
        let stationary = stationary_distribution(matrix)?;
        let reversible = matrix.satisfies_detailed_balance(&stationary, REVERSIBILITY_TOL);
        let moduli = if reversible {
            symmetric_spectrum(matrix, &stationary)
        } else {
            matrix
                .as_dmatrix()
                .complex_eigenvalues()
                .iter()
                .map(|z| (z.re, z.norm()))
                .collect()
        };
        let lambda = second_absolute(&moduli)?;
        Ok(Self {
            matrix: matrix.clone(),
            stationary,
            lambda,
            reversible,
        })
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn relaxation_time(&self) -> f64 {
        1.0 / (1.0 - self.lambda)
    }

    pub fn is_reversible(&self) -> bool {
        self.reversible
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    fn values(&self, f: &ScalarFunction<usize>) -> Vec<f64> {
        f.values(self.matrix.len())
    }

    pub fn mean(&self, f: &ScalarFunction<usize>) -> f64 {
        dot(&self.stationary, &self.values(f))
    }

    pub fn variance(&self, f: &ScalarFunction<usize>) -> f64 {
        let values = self.values(f);
        let mu = dot(&self.stationary, &values);
        self.stationary
            .iter()
            .zip(&values)
            .map(|(p, v)| p * (v - mu).powi(2))
            .sum::<f64>()
            .max(0.0)
    }

    pub fn summary(&self, f: &ScalarFunction<usize>) -> SpectralSummary {
        SpectralSummary {
            stationary: self.stationary.clone(),
            lambda: self.lambda,
            relaxation_time: self.relaxation_time(),
            mean: self.mean(f),
            variance: self.variance(f),
            pi_min: self
                .stationary
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min),
            reversible: self.reversible,
        }
    }

    /// `C_1 .. C_max_lag` at stationarity, one matrix-vector product per lag.
    pub fn autocovariances(&self, f: &ScalarFunction<usize>, max_lag: usize) -> Vec<f64> {
        let values = self.values(f);
        let mu = dot(&self.stationary, &values);
        let centered = DVector::from_iterator(values.len(), values.iter().map(|v| v - mu));
        let weighted: Vec<f64> = self
            .stationary
            .iter()
            .zip(centered.iter())
            .map(|(p, c)| p * c)
            .collect();
        let m = self.matrix.as_dmatrix();
        let mut propagated = centered;
        (1..=max_lag)
            .map(|_| {
                propagated = m * &propagated;
                dot(&weighted, propagated.as_slice())
            })
            .collect()
    }

    pub fn autocovariance(&self, f: &ScalarFunction<usize>, lag: usize) -> f64 {
        if lag == 0 {
            return self.variance(f);
        }
        self.autocovariances(f, lag)[lag - 1]
    }

    pub fn trace_variance(&self, f: &ScalarFunction<usize>, horizon: usize) -> Result<VarianceProfile> {
        if horizon == 0 {
            return Err(Error::ZeroLength);
        }
        let autocovariances = self.autocovariances(f, horizon - 1);
        let trace_variance = trace_variance_from(self.variance(f), &autocovariances, horizon);
        Ok(VarianceProfile {
            horizon,
            autocovariances,
            trace_variance,
        })
    }

    /// `v_1 .. v_max` from a single autocovariance pass.
    pub fn trace_variance_sweep(&self, f: &ScalarFunction<usize>, max_horizon: usize) -> Vec<f64> {
        let v = self.variance(f);
        let c = self.autocovariances(f, max_horizon.saturating_sub(1));
        (1..=max_horizon)
            .map(|t| trace_variance_from(v, &c[..t - 1], t))
            .collect()
    }

    /// Checks `v_π/T <= v_T <= 2 τ_rel v_π / T`. Requires a lazy reversible
    /// chain.
    pub fn sandwich(&self, f: &ScalarFunction<usize>, horizon: usize) -> Result<SandwichVerdict> {
        if !self.reversible || !self.matrix.is_lazy() {
            return Err(Error::InvalidParameter(
                "sandwich bound needs a lazy reversible chain".into(),
            ));
        }
        let profile = self.trace_variance(f, horizon)?;
        let v = self.variance(f);
        let t = horizon as f64;
        let lower = v / t;
        let upper = 2.0 * self.relaxation_time() * v / t;
        let holds = lower <= profile.trace_variance + SANDWICH_SLACK
            && profile.trace_variance <= upper + SANDWICH_SLACK;
        Ok(SandwichVerdict {
            horizon,
            lower,
            trace_variance: profile.trace_variance,
            upper,
            holds,
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn trace_variance_from(variance: f64, autocovariances: &[f64], horizon: usize) -> f64 {
    let t = horizon as f64;
    let weighted: f64 = autocovariances
        .iter()
        .enumerate()
        .map(|(k, c)| (t - (k + 1) as f64) * c)
        .sum();
    variance / t + 2.0 * weighted / (t * t)
}

/// Solves `π P = π`, `Σ π = 1`. Fails when the solution is not unique.
pub fn stationary_distribution(matrix: &TransitionMatrix) -> Result<Vec<f64>> {
    let n = matrix.len();
    let p = matrix.as_dmatrix();
    let mut a: DMatrix<f64> = p.transpose() - DMatrix::identity(n, n);
    a.row_mut(n - 1).fill(1.0);
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let solution = a
        .full_piv_lu()
        .solve(&b)
        .ok_or_else(|| Error::NotErgodic("stationary distribution is not unique".into()))?;
    let mut pi: Vec<f64> = solution.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|x| *x /= total);
    let residual = (DVector::from_row_slice(&pi).transpose() * p - DVector::from_row_slice(&pi).transpose())
        .amax();
    if residual > 1e-8 {
        return Err(Error::NotErgodic(format!(
            "stationary solve residual {residual:e}"
        )));
    }
    Ok(pi)
}

/// Eigenvalues of `D^{1/2} P D^{-1/2}`, which is symmetric for a reversible
/// chain; returned as (real part, modulus).
fn symmetric_spectrum(matrix: &TransitionMatrix, pi: &[f64]) -> Vec<(f64, f64)> {
    let n = matrix.len();
    let p = matrix.as_dmatrix();
    let sq: Vec<f64> = pi.iter().map(|x| x.sqrt()).collect();
    let s = DMatrix::from_fn(n, n, |i, j| {
        if sq[i] == 0.0 || sq[j] == 0.0 {
            0.0
        } else {
            sq[i] * p[(i, j)] / sq[j]
        }
    });
    let s = (&s + s.transpose()) * 0.5;
    s.symmetric_eigenvalues()
        .iter()
        .map(|&x| (x, x.abs()))
        .collect()
}

/// Drops the single eigenvalue closest to 1 and returns the largest modulus
/// among the rest.
fn second_absolute(eigen: &[(f64, f64)]) -> Result<f64> {
    let unit = eigen
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let da = (a.1 .0 - 1.0).abs() + (a.1 .1 - 1.0).abs();
            let db = (b.1 .0 - 1.0).abs() + (b.1 .1 - 1.0).abs();
            da.total_cmp(&db)
        })
        .map(|(i, _)| i)
        .ok_or(Error::EmptyInput)?;
    let lambda = eigen
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != unit)
        .map(|(_, &(_, m))| m)
        .fold(0.0, f64::max);
    if lambda >= 1.0 - UNIT_TOL {
        return Err(Error::NotErgodic(format!(
            "second absolute eigenvalue {lambda} has unit modulus (reducible or periodic)"
        )));
    }
    Ok(lambda)
}

pub fn summarize(matrix: &TransitionMatrix, f: &ScalarFunction<usize>) -> Result<SpectralSummary> {
    Ok(SpectralOracle::new(matrix)?.summary(f))
}

pub fn autocovariance(matrix: &TransitionMatrix, f: &ScalarFunction<usize>, lag: usize) -> Result<f64> {
    Ok(SpectralOracle::new(matrix)?.autocovariance(f, lag))
}

pub fn exact_trace_variance(
    matrix: &TransitionMatrix,
    f: &ScalarFunction<usize>,
    horizon: usize,
) -> Result<VarianceProfile> {
    SpectralOracle::new(matrix)?.trace_variance(f, horizon)
}

pub fn check_sandwich(
    matrix: &TransitionMatrix,
    f: &ScalarFunction<usize>,
    horizon: usize,
) -> Result<SandwichVerdict> {
    SpectralOracle::new(matrix)?.sandwich(f, horizon)
}

/// Exact `v_T(f_i)` on the `n`-cycle for every block width `i` with `2i | n`.
pub fn cycle_separation_profile(n: usize, horizon: usize) -> Result<Vec<SeparationRow>> {
    let cycle = make_cycle(n)?;
    let oracle = SpectralOracle::new(cycle.matrix())?;
    (1..=n / 2)
        .filter(|i| n % (2 * i) == 0)
        .map(|i| {
            let f = make_cycle_function(n, i)?;
            Ok(SeparationRow {
                half_width: i,
                trace_variance: oracle.trace_variance(&f, horizon)?.trace_variance,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{Kernel, MatrixKernel};

    #[test]
    fn cycle_is_uniform() {
        let c = make_cycle(4).unwrap();
        let f = make_cycle_function(4, 1).unwrap();
        let s = summarize(c.matrix(), &f).unwrap();
        for p in &s.stationary {
            assert!((p - 0.25).abs() < 1e-12);
        }
        assert!(s.reversible);
        assert!((s.relaxation_time - 1.0 / (1.0 - s.lambda)).abs() < 1e-15);
        assert!((s.lambda - c.meta().lambda.unwrap()).abs() < 1e-9);
    }

    #[test]
    fn single_state_is_rejected() {
        let k = MatrixKernel::identity(1).unwrap();
        let f = ScalarFunction::constant(0.0).unwrap();
        assert!(matches!(summarize(k.matrix(), &f), Err(Error::NotErgodic(_))));
    }

    #[test]
    fn reducible_and_periodic_are_rejected() {
        let id = MatrixKernel::identity(3).unwrap();
        let f = ScalarFunction::constant(0.0).unwrap();
        assert!(matches!(summarize(id.matrix(), &f), Err(Error::NotErgodic(_))));
        let flip = TransitionMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(summarize(&flip, &f), Err(Error::NotErgodic(_))));
    }

    #[test]
    fn rank_one_chain() {
        let u = MatrixKernel::uniform(2).unwrap();
        let f = ScalarFunction::indicator(2, &[1]).unwrap();
        let s = summarize(u.matrix(), &f).unwrap();
        assert!(s.lambda.abs() < 1e-12);
        assert!((s.relaxation_time - 1.0).abs() < 1e-12);
        let o = SpectralOracle::new(u.matrix()).unwrap();
        assert!(o.autocovariances(&f, 5).iter().all(|c| c.abs() < 1e-15));
        for t in 1..10 {
            let v = o.trace_variance(&f, t).unwrap().trace_variance;
            assert!((v - 0.25 / t as f64).abs() < 1e-15);
            let verdict = o.sandwich(&f, t).unwrap();
            assert!(verdict.holds);
            assert!((verdict.lower - verdict.trace_variance).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_function_has_zero_autocovariance() {
        let c = make_cycle(6).unwrap();
        let f = ScalarFunction::constant(0.3).unwrap();
        for lag in 1..5 {
            assert!(autocovariance(c.matrix(), &f, lag).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn trace_variance_at_one_is_stationary_variance() {
        let c = make_cycle(8).unwrap();
        let f = make_cycle_function(8, 2).unwrap();
        let p = exact_trace_variance(c.matrix(), &f, 1).unwrap();
        assert!((p.trace_variance - 0.25).abs() < 1e-15);
        assert!(p.autocovariances.is_empty());
        assert!(exact_trace_variance(c.matrix(), &f, 0).is_err());
    }

    #[test]
    fn non_reversible_uses_general_solver() {
        // Biased 3-cycle with holding: not reversible w.r.t. its uniform law.
        let m = TransitionMatrix::from_rows(&[
            vec![0.5, 0.4, 0.1],
            vec![0.1, 0.5, 0.4],
            vec![0.4, 0.1, 0.5],
        ])
        .unwrap();
        let o = SpectralOracle::new(&m).unwrap();
        assert!(!o.is_reversible());
        // Eigenvalues 0.5 + 0.4 w + 0.1 w^2 for cube roots of unity w.
        let w = nalgebra::Complex::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let expected = (nalgebra::Complex::new(0.5, 0.0) + w * 0.4 + w * w * 0.1).norm();
        assert!((o.lambda() - expected).abs() < 1e-9);
        let f = ScalarFunction::indicator(3, &[0]).unwrap();
        assert!(o.sandwich(&f, 3).is_err());
    }

    #[test]
    fn separation_small_horizon() {
        let rows = cycle_separation_profile(4, 1).unwrap();
        assert_eq!(rows.len(), 2);
        for r in rows {
            assert!((r.trace_variance - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let c = make_cycle(10).unwrap();
        assert!(matches!(
            SpectralOracle::with_cap(c.matrix(), 8),
            Err(Error::TooLarge { states: 10, cap: 8 })
        ));
    }
}
