//! Markov-chain abstraction, trace generation, and the derived chains used by
//! the estimators: the tensor product of two independent copies, the
//! length-`T` trace chain, lazification, and lumped (projection) chains.

use std::fmt::Debug;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng;

const ROW_SUM_TOL: f64 = 1e-12;
const LUMP_TOL: f64 = 1e-9;

/// Declared properties of a kernel. `lambda` is an upper bound on the second
/// absolute eigenvalue, when one is known.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelMeta {
    pub lazy: bool,
    pub reversible: bool,
    pub lambda: Option<f64>,
}

/// A samplable Markov transition.
///
/// Kernels are immutable once built; `step` advances a state in place using
/// the caller's randomness stream.
pub trait Kernel: Send + Sync {
    type State: Clone + Debug + PartialEq + Send + Sync;

    fn step<R: Rng + ?Sized>(&self, state: &mut Self::State, rng: &mut R);

    /// Rejects states outside the kernel's state space.
    fn check_state(&self, _state: &Self::State) -> Result<()> {
        Ok(())
    }

    fn meta(&self) -> KernelMeta;
}

/// A kernel over a finite, enumerable state space with an explicit matrix.
pub trait ExplicitKernel: Kernel {
    fn num_states(&self) -> usize;
    fn state_index(&self, state: &Self::State) -> Option<usize>;
    fn state_at(&self, index: usize) -> Self::State;
    fn transition_matrix(&self) -> TransitionMatrix;
}

impl<K: Kernel + ?Sized> Kernel for &K {
    type State = K::State;

    fn step<R: Rng + ?Sized>(&self, state: &mut Self::State, rng: &mut R) {
        (**self).step(state, rng)
    }

    fn check_state(&self, state: &Self::State) -> Result<()> {
        (**self).check_state(state)
    }

    fn meta(&self) -> KernelMeta {
        (**self).meta()
    }
}

impl<K: ExplicitKernel + ?Sized> ExplicitKernel for &K {
    fn num_states(&self) -> usize {
        (**self).num_states()
    }
    fn state_index(&self, state: &Self::State) -> Option<usize> {
        (**self).state_index(state)
    }
    fn state_at(&self, index: usize) -> Self::State {
        (**self).state_at(index)
    }
    fn transition_matrix(&self) -> TransitionMatrix {
        (**self).transition_matrix()
    }
}

fn check_lambda(lambda: Option<f64>) -> Result<()> {
    match lambda {
        Some(l) if !(0.0..1.0).contains(&l) => Err(Error::InvalidLambda(l)),
        _ => Ok(()),
    }
}

/// Row-stochastic square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix(DMatrix<f64>);

impl TransitionMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::EmptyInput);
        }
        for (row, r) in m.row_iter().enumerate() {
            for (col, &value) in r.iter().enumerate() {
                if !(value >= 0.0) {
                    return Err(Error::NegativeProbability { row, col, value });
                }
            }
            let sum = r.sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::NotRowStochastic { row, sum });
            }
        }
        Ok(Self(m))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
            return Err(Error::NotSquare { rows: n, cols });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn len(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.0.nrows() == 0
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.0[(from, to)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.0.row(i).iter().copied().collect()
    }

    /// Every diagonal entry is at least 1/2.
    pub fn is_lazy(&self) -> bool {
        (0..self.len()).all(|i| self.0[(i, i)] >= 0.5 - ROW_SUM_TOL)
    }

    /// Detailed balance with respect to `pi`, up to `tol`.
    pub fn satisfies_detailed_balance(&self, pi: &[f64], tol: f64) -> bool {
        let n = self.len();
        (0..n).all(|x| {
            (0..n).all(|y| (pi[x] * self.0[(x, y)] - pi[y] * self.0[(y, x)]).abs() <= tol)
        })
    }

    /// Kronecker product: the transition matrix of two independent copies.
    pub fn kron(&self, other: &TransitionMatrix) -> TransitionMatrix {
        TransitionMatrix(self.0.kronecker(&other.0))
    }

    /// `(I + M) / 2`.
    pub fn lazified(&self) -> TransitionMatrix {
        let n = self.len();
        TransitionMatrix((&self.0 + DMatrix::identity(n, n)) * 0.5)
    }
}

/// A kernel over states `0..N` given by an explicit matrix.
#[derive(Clone, Debug)]
pub struct MatrixKernel {
    matrix: TransitionMatrix,
    // Per row: (target, cumulative probability) over the nonzero entries.
    cumulative: Vec<Vec<(usize, f64)>>,
    meta: KernelMeta,
}

impl MatrixKernel {
    /// Builds a kernel, validating the laziness claim against the diagonal
    /// and the eigenvalue bound against `[0, 1)`.
    pub fn new(
        matrix: TransitionMatrix,
        lazy: bool,
        reversible: bool,
        lambda: Option<f64>,
    ) -> Result<Self> {
        check_lambda(lambda)?;
        if lazy {
            for i in 0..matrix.len() {
                let d = matrix.get(i, i);
                if d < 0.5 - ROW_SUM_TOL {
                    return Err(Error::NotLazy {
                        state: i,
                        diagonal: d,
                    });
                }
            }
        }
        let cumulative = (0..matrix.len())
            .map(|i| {
                let mut acc = 0.0;
                matrix
                    .as_dmatrix()
                    .row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0.0)
                    .map(|(j, &p)| {
                        acc += p;
                        (j, acc)
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            matrix,
            cumulative,
            meta: KernelMeta {
                lazy,
                reversible,
                lambda,
            },
        })
    }

    /// `M = I`: every state is absorbing.
    pub fn identity(n: usize) -> Result<Self> {
        let m = TransitionMatrix::new(DMatrix::identity(n, n))?;
        Self::new(m, true, true, None)
    }

    /// Every row equal to the uniform distribution (a rank-one chain).
    pub fn uniform(n: usize) -> Result<Self> {
        let m = TransitionMatrix::new(DMatrix::from_element(n, n, 1.0 / n as f64))?;
        Self::new(m, n <= 2, true, Some(0.0))
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn with_lambda(mut self, lambda: Option<f64>) -> Result<Self> {
        check_lambda(lambda)?;
        self.meta.lambda = lambda;
        Ok(self)
    }
}

impl Kernel for MatrixKernel {
    type State = usize;

    fn step<R: Rng + ?Sized>(&self, state: &mut usize, rng: &mut R) {
        let row = &self.cumulative[*state];
        let u: f64 = rng.random::<f64>() * row.last().map_or(1.0, |&(_, c)| c);
        let pos = row.partition_point(|&(_, c)| c <= u);
        *state = row[pos.min(row.len() - 1)].0;
    }

    fn check_state(&self, state: &usize) -> Result<()> {
        if *state < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidState(format!(
                "state {state} outside 0..{}",
                self.len()
            )))
        }
    }

    fn meta(&self) -> KernelMeta {
        self.meta
    }
}

impl ExplicitKernel for MatrixKernel {
    fn num_states(&self) -> usize {
        self.len()
    }
    fn state_index(&self, state: &usize) -> Option<usize> {
        (*state < self.len()).then_some(*state)
    }
    fn state_at(&self, index: usize) -> usize {
        index
    }
    fn transition_matrix(&self) -> TransitionMatrix {
        self.matrix.clone()
    }
}

/// Samples an index from a probability vector.
pub fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

/// A run of a chain. The start state handed to [`run_trace`] is not part of
/// `states`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trace<S> {
    pub states: Vec<S>,
    pub seed: u64,
    /// Index of the first sample from the stationary regime.
    pub stationary_from: usize,
}

impl<S> Trace<S> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Runs `length` steps from `start` with the stream seeded by `seed`.
pub fn run_trace<K: Kernel>(
    kernel: &K,
    start: &K::State,
    length: usize,
    seed: u64,
) -> Result<Trace<K::State>> {
    let mut rng = rng::stream(seed);
    let states = run_trace_with(kernel, start, length, &mut rng)?;
    Ok(Trace {
        states,
        seed,
        stationary_from: 0,
    })
}

/// Like [`run_trace`] but draws from an existing stream.
pub fn run_trace_with<K: Kernel, R: Rng + ?Sized>(
    kernel: &K,
    start: &K::State,
    length: usize,
    rng: &mut R,
) -> Result<Vec<K::State>> {
    if length == 0 {
        return Err(Error::ZeroLength);
    }
    kernel.check_state(start)?;
    let mut current = start.clone();
    let mut states = Vec::with_capacity(length);
    for _ in 0..length {
        kernel.step(&mut current, rng);
        states.push(current.clone());
    }
    Ok(states)
}

/// A bounded real-valued function on states with a declared range `[a, b]`.
pub struct ScalarFunction<S: ?Sized> {
    eval: Arc<dyn Fn(&S) -> f64 + Send + Sync>,
    lower: f64,
    upper: f64,
}

impl<S: ?Sized> Clone for ScalarFunction<S> {
    fn clone(&self) -> Self {
        Self {
            eval: Arc::clone(&self.eval),
            lower: self.lower,
            upper: self.upper,
        }
    }
}

impl<S: ?Sized> Debug for ScalarFunction<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .finish_non_exhaustive()
    }
}

impl<S: ?Sized> ScalarFunction<S> {
    pub fn new<F>(lower: f64, upper: f64, eval: F) -> Result<Self>
    where
        F: Fn(&S) -> f64 + Send + Sync + 'static,
    {
        if !(lower.is_finite() && upper.is_finite() && lower <= upper) {
            return Err(Error::InvalidRange { lower, upper });
        }
        Ok(Self {
            eval: Arc::new(eval),
            lower,
            upper,
        })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(c, c, move |_| c)
    }

    pub fn eval(&self, state: &S) -> f64 {
        let v = (self.eval)(state);
        debug_assert!(
            v >= self.lower && v <= self.upper,
            "f = {v} outside [{}, {}]",
            self.lower,
            self.upper
        );
        v
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// `R = b - a`.
    pub fn span(&self) -> f64 {
        self.upper - self.lower
    }
}

impl ScalarFunction<usize> {
    /// Function on states `0..values.len()` given by a table, with range
    /// `[lower, upper]`.
    pub fn from_values(values: Vec<f64>, lower: f64, upper: f64) -> Result<Self> {
        if let Some(&value) = values.iter().find(|&&v| v < lower || v > upper) {
            return Err(Error::ValueOutOfRange {
                value,
                lower,
                upper,
            });
        }
        Self::new(lower, upper, move |&s: &usize| values[s])
    }

    /// `1` on the listed states, `0` elsewhere, over `n` states.
    pub fn indicator(n: usize, states: &[usize]) -> Result<Self> {
        let mut values = vec![0.0; n];
        for &s in states {
            if s >= n {
                return Err(Error::InvalidState(format!("state {s} outside 0..{n}")));
            }
            values[s] = 1.0;
        }
        Self::from_values(values, 0.0, 1.0)
    }

    /// Tabulates the function on `0..n`.
    pub fn values(&self, n: usize) -> Vec<f64> {
        (0..n).map(|s| self.eval(&s)).collect()
    }
}

/// `f_avg(x_1..x_T) = (1/T) * sum f(x_i)`, with the same declared range as `f`.
pub fn lift_to_trace_average<S: 'static>(
    f: &ScalarFunction<S>,
    length: usize,
) -> Result<ScalarFunction<Vec<S>>> {
    if length == 0 {
        return Err(Error::ZeroLength);
    }
    let inner = f.clone();
    ScalarFunction::new(f.lower(), f.upper(), move |trace: &Vec<S>| {
        let sum: f64 = trace.iter().map(|s| inner.eval(s)).sum();
        (sum / trace.len() as f64).clamp(inner.lower(), inner.upper())
    })
}

/// Lazy cycle on `n` states: hold with 1/2, move to each neighbor with 1/4.
pub fn make_cycle(n: usize) -> Result<MatrixKernel> {
    if n < 3 {
        return Err(Error::CycleTooSmall(n));
    }
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.5
        } else if (i + 1) % n == j || (j + 1) % n == i {
            0.25
        } else {
            0.0
        }
    });
    // Eigenvalues are (1 + cos(2 pi j / n)) / 2, all nonnegative.
    let lambda = 0.5 + 0.5 * (2.0 * std::f64::consts::PI / n as f64).cos();
    MatrixKernel::new(TransitionMatrix::new(m)?, true, true, Some(lambda))
}

/// Block indicator on the cycle: `f_i(x) = 0` iff `x mod 2i < i`.
///
/// Requires `2i | n`, so that state `n` and state `0` agree and the
/// stationary mean is exactly 1/2.
pub fn make_cycle_function(n: usize, i: usize) -> Result<ScalarFunction<usize>> {
    if i == 0 || 2 * i > n || n % (2 * i) != 0 {
        return Err(Error::InvalidBlockWidth { n, i });
    }
    let values = (0..n)
        .map(|x| if x % (2 * i) < i { 0.0 } else { 1.0 })
        .collect();
    ScalarFunction::from_values(values, 0.0, 1.0)
}

/// Lumps an explicit chain along `classes[x]` (class ids `0..c`, all used).
pub fn project_chain(kernel: &MatrixKernel, classes: &[usize]) -> Result<MatrixKernel> {
    let n = kernel.len();
    if classes.len() != n {
        return Err(Error::PartitionSize {
            expected: n,
            got: classes.len(),
        });
    }
    let c = classes.iter().max().map_or(0, |&m| m + 1);
    let mut representative = vec![None; c];
    for (x, &cls) in classes.iter().enumerate() {
        representative[cls].get_or_insert(x);
    }
    if let Some(missing) = representative.iter().position(Option::is_none) {
        return Err(Error::InvalidParameter(format!(
            "class {missing} has no states"
        )));
    }
    let m = kernel.matrix();
    let mass = |x: usize| {
        let mut out = vec![0.0; c];
        for y in 0..n {
            out[classes[y]] += m.get(x, y);
        }
        out
    };
    let mut lumped = DMatrix::zeros(c, c);
    for (cls, rep) in representative.iter().enumerate() {
        let rep = rep.expect("checked above");
        let reference = mass(rep);
        for x in (0..n).filter(|&x| classes[x] == cls && x != rep) {
            let other = mass(x);
            for (target, (&lhs, &rhs)) in reference.iter().zip(&other).enumerate() {
                if (lhs - rhs).abs() > LUMP_TOL {
                    return Err(Error::NotLumpable {
                        x: rep,
                        y: x,
                        class: target,
                        lhs,
                        rhs,
                    });
                }
            }
        }
        for (target, p) in reference.into_iter().enumerate() {
            lumped[(cls, target)] = p;
        }
    }
    // Renormalize away rounding from the summation.
    for mut row in lumped.row_iter_mut() {
        let s = row.sum();
        row /= s;
    }
    let meta = kernel.meta();
    MatrixKernel::new(
        TransitionMatrix::new(lumped)?,
        meta.lazy,
        meta.reversible,
        meta.lambda,
    )
}

/// Two independent copies of a kernel evolving side by side.
#[derive(Clone, Debug)]
pub struct ProductKernel<K> {
    base: K,
}

pub fn tensor_product<K: Kernel>(kernel: K) -> ProductKernel<K> {
    ProductKernel { base: kernel }
}

impl<K: Kernel> ProductKernel<K> {
    pub fn base(&self) -> &K {
        &self.base
    }

    /// Advances each coordinate with its own stream.
    pub fn step_pair<R1: Rng + ?Sized, R2: Rng + ?Sized>(
        &self,
        state: &mut (K::State, K::State),
        rng_a: &mut R1,
        rng_b: &mut R2,
    ) {
        self.base.step(&mut state.0, rng_a);
        self.base.step(&mut state.1, rng_b);
    }
}

impl<K: Kernel> Kernel for ProductKernel<K> {
    type State = (K::State, K::State);

    fn step<R: Rng + ?Sized>(&self, state: &mut Self::State, rng: &mut R) {
        self.base.step(&mut state.0, rng);
        self.base.step(&mut state.1, rng);
    }

    fn check_state(&self, state: &Self::State) -> Result<()> {
        self.base.check_state(&state.0)?;
        self.base.check_state(&state.1)
    }

    fn meta(&self) -> KernelMeta {
        let base = self.base.meta();
        // The product's spectral gap equals the base's; its diagonal is only
        // guaranteed to be >= 1/4, so it is not declared lazy.
        KernelMeta {
            lazy: false,
            reversible: base.reversible,
            lambda: base.lambda,
        }
    }
}

impl<K: ExplicitKernel> ExplicitKernel for ProductKernel<K> {
    fn num_states(&self) -> usize {
        let n = self.base.num_states();
        n * n
    }

    fn state_index(&self, state: &Self::State) -> Option<usize> {
        let n = self.base.num_states();
        Some(self.base.state_index(&state.0)? * n + self.base.state_index(&state.1)?)
    }

    fn state_at(&self, index: usize) -> Self::State {
        let n = self.base.num_states();
        (self.base.state_at(index / n), self.base.state_at(index % n))
    }

    fn transition_matrix(&self) -> TransitionMatrix {
        let m = self.base.transition_matrix();
        m.kron(&m)
    }
}

/// Chain on length-`T` traces: one step regenerates a whole trace,
/// `b_1 ~ M(a_T, .)`, `b_{i+1} ~ M(b_i, .)`.
#[derive(Clone, Debug)]
pub struct TraceChain<K> {
    base: K,
    length: usize,
}

pub fn trace_chain<K: Kernel>(kernel: K, length: usize) -> Result<TraceChain<K>> {
    if length == 0 {
        return Err(Error::ZeroLength);
    }
    Ok(TraceChain {
        base: kernel,
        length,
    })
}

impl<K: Kernel> TraceChain<K> {
    pub fn base(&self) -> &K {
        &self.base
    }

    pub fn trace_length(&self) -> usize {
        self.length
    }

    /// Initial trace whose last coordinate is `last`; the arbitrary prefix is
    /// filled with copies of `last`. The prefix never reaches an estimate
    /// because every step resamples the whole trace from the last coordinate.
    pub fn padded_state(&self, last: &K::State) -> Vec<K::State> {
        vec![last.clone(); self.length]
    }
}

impl<K: Kernel> Kernel for TraceChain<K> {
    type State = Vec<K::State>;

    fn step<R: Rng + ?Sized>(&self, state: &mut Self::State, rng: &mut R) {
        let mut current = state
            .last()
            .expect("trace chain states are non-empty")
            .clone();
        for slot in state.iter_mut() {
            self.base.step(&mut current, rng);
            slot.clone_from(&current);
        }
    }

    fn check_state(&self, state: &Self::State) -> Result<()> {
        if state.len() != self.length {
            return Err(Error::InvalidState(format!(
                "trace of length {} for a trace chain of length {}",
                state.len(),
                self.length
            )));
        }
        state.iter().try_for_each(|s| self.base.check_state(s))
    }

    fn meta(&self) -> KernelMeta {
        let base = self.base.meta();
        KernelMeta {
            lazy: self.length == 1 && base.lazy,
            reversible: self.length == 1 && base.reversible,
            lambda: base.lambda.map(|l| l.powi(self.length as i32)),
        }
    }
}

impl<K: ExplicitKernel> ExplicitKernel for TraceChain<K> {
    fn num_states(&self) -> usize {
        self.base.num_states().pow(self.length as u32)
    }

    fn state_index(&self, state: &Self::State) -> Option<usize> {
        let n = self.base.num_states();
        state
            .iter()
            .try_fold(0usize, |acc, s| Some(acc * n + self.base.state_index(s)?))
    }

    fn state_at(&self, index: usize) -> Self::State {
        trace_digits(index, self.base.num_states(), self.length)
            .into_iter()
            .map(|d| self.base.state_at(d))
            .collect()
    }

    fn transition_matrix(&self) -> TransitionMatrix {
        let base = self.base.transition_matrix();
        let n = base.len();
        let size = self.num_states();
        // Weight of a trace given its first state: prod M(b_i, b_{i+1}).
        let digits: Vec<Vec<usize>> = (0..size)
            .map(|b| trace_digits(b, n, self.length))
            .collect();
        let inner: Vec<f64> = digits
            .iter()
            .map(|b| b.windows(2).map(|w| base.get(w[0], w[1])).product())
            .collect();
        let m = DMatrix::from_fn(size, size, |a, b| {
            let last = digits[a][self.length - 1];
            base.get(last, digits[b][0]) * inner[b]
        });
        TransitionMatrix(m)
    }
}

/// Base-`n` digits of `index`, most significant first, padded to `length`.
pub fn trace_digits(mut index: usize, n: usize, length: usize) -> Vec<usize> {
    let mut out = vec![0; length];
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

/// Holds with probability 1/2, otherwise steps the inner kernel.
///
/// Lazification maps eigenvalues `x -> (1 + x) / 2`, so the declared bound
/// becomes `(1 + Λ) / 2`.
#[derive(Clone, Debug)]
pub struct Lazy<K> {
    inner: K,
}

pub fn lazify<K: Kernel>(kernel: K) -> Lazy<K> {
    Lazy { inner: kernel }
}

impl<K: Kernel> Lazy<K> {
    pub fn inner(&self) -> &K {
        &self.inner
    }
}

impl<K: Kernel> Kernel for Lazy<K> {
    type State = K::State;

    fn step<R: Rng + ?Sized>(&self, state: &mut Self::State, rng: &mut R) {
        if rng.random_bool(0.5) {
            self.inner.step(state, rng);
        }
    }

    fn check_state(&self, state: &Self::State) -> Result<()> {
        self.inner.check_state(state)
    }

    fn meta(&self) -> KernelMeta {
        let m = self.inner.meta();
        KernelMeta {
            lazy: true,
            reversible: m.reversible,
            lambda: m.lambda.map(|l| (1.0 + l) / 2.0),
        }
    }
}

impl<K: ExplicitKernel> ExplicitKernel for Lazy<K> {
    fn num_states(&self) -> usize {
        self.inner.num_states()
    }
    fn state_index(&self, state: &Self::State) -> Option<usize> {
        self.inner.state_index(state)
    }
    fn state_at(&self, index: usize) -> Self::State {
        self.inner.state_at(index)
    }
    fn transition_matrix(&self) -> TransitionMatrix {
        self.inner.transition_matrix().lazified()
    }
}

/// Counts every step taken through it; used to audit step accounting.
#[derive(Debug)]
pub struct CountingKernel<K> {
    inner: K,
    steps: AtomicU64,
}

impl<K: Kernel> CountingKernel<K> {
    pub fn new(inner: K) -> Self {
        Self {
            inner,
            steps: AtomicU64::new(0),
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.steps.store(0, Ordering::Relaxed);
    }
}

impl<K: Kernel> Kernel for CountingKernel<K> {
    type State = K::State;

    fn step<R: Rng + ?Sized>(&self, state: &mut Self::State, rng: &mut R) {
        self.steps.fetch_add(1, Ordering::Relaxed);
        self.inner.step(state, rng);
    }

    fn check_state(&self, state: &Self::State) -> Result<()> {
        self.inner.check_state(state)
    }

    fn meta(&self) -> KernelMeta {
        self.inner.meta()
    }
}
