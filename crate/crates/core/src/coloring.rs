//! Proper colorings, Glauber dynamics, and approximate counting by a
//! telescoping product.
//!
//! With `G_0 ⊂ G_1 ⊂ … ⊂ G_{#E} = G` obtained by adding one edge `(u, v)` at
//! a time,
//!
//! ```text
//! #Γ(G, k) = k^n · Π_i #Γ(G_i, k) / #Γ(G_{i-1}, k)
//! ```
//!
//! and each ratio is the probability that `u` and `v` get different colors
//! under a uniform proper coloring of `G_{i-1}`. Phase `i` therefore samples
//! colorings of the graph *without* its edge and averages the indicator
//! `γ(u) ≠ γ(v)`.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{lazify, ExplicitKernel, Kernel, KernelMeta, ScalarFunction, TransitionMatrix};
use crate::dynamite::{self, EstimateReport};
use crate::error::{Error, Result};
use crate::estimators::{hoeffding_sample_complexity, ConcentrationParams};
use crate::rng;
use crate::spectral::SpectralOracle;

/// Largest `k^n` brute-force counting will enumerate.
pub const BRUTE_FORCE_LIMIT: u64 = 100_000_000;

/// Largest `k^n` for which Glauber connectivity is checked exactly when the
/// degree floor does not hold.
pub const EXACT_CONNECTIVITY_LIMIT: u64 = 1_000_000;

/// Undirected simple graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

/// Wire form: `{"n": <int>, "edges": [[u, v], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(g: GraphJson) -> Result<Self> {
        Graph::new(g.n, g.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges.into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl Graph {
    /// Builds a graph, normalizing each edge to `(min, max)` and dropping
    /// duplicates while keeping first-occurrence order.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        let mut kept = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidEdge { u, v, n });
            }
            let (a, b) = (u.min(v), u.max(v));
            if adjacency[a].contains(&b) {
                continue;
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
            kept.push((a, b));
        }
        Ok(Self {
            n,
            edges: kept,
            adjacency,
        })
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, []).expect("no edges")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (v - 1, v))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::CycleTooSmall(n));
        }
        Self::new(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    pub fn complete(n: usize) -> Self {
        Self::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].contains(&v)
    }

    /// Same vertex set, only the listed edges.
    pub fn with_edges(&self, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(self.n, edges.iter().copied())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Color assignment with colors in `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Coloring {
    colors: Vec<u16>,
    k: u16,
}

impl Coloring {
    pub fn new(colors: Vec<u16>, k: u16) -> Result<Self> {
        if let Some((vertex, &color)) = colors
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c > k)
        {
            return Err(Error::ColorOutOfRange { vertex, color, k });
        }
        Ok(Self { colors, k })
    }

    pub fn colors(&self) -> &[u16] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> u16 {
        self.colors[v]
    }

    pub fn k(&self) -> u16 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

fn check_shape(graph: &Graph, coloring: &Coloring) -> Result<()> {
    if coloring.len() != graph.n() {
        return Err(Error::ColoringLength {
            expected: graph.n(),
            got: coloring.len(),
        });
    }
    Ok(())
}

fn first_conflict(graph: &Graph, colors: &[u16]) -> Option<(usize, usize)> {
    graph
        .edges()
        .iter()
        .copied()
        .find(|&(u, v)| colors[u] == colors[v])
}

/// No edge is monochromatic.
pub fn is_proper(graph: &Graph, coloring: &Coloring) -> Result<bool> {
    check_shape(graph, coloring)?;
    Ok(first_conflict(graph, &coloring.colors).is_none())
}

fn ensure_proper(graph: &Graph, coloring: &Coloring) -> Result<()> {
    check_shape(graph, coloring)?;
    match first_conflict(graph, &coloring.colors) {
        Some((u, v)) => Err(Error::ImproperColoring { u, v }),
        None => Ok(()),
    }
}

/// Recolors `u` with `c` if that keeps the coloring proper. Returns whether
/// the coloring changed.
pub fn glauber_update(graph: &Graph, colors: &mut [u16], u: usize, c: u16) -> bool {
    if colors[u] == c || graph.neighbors(u).iter().any(|&w| colors[w] == c) {
        return false;
    }
    colors[u] = c;
    true
}

/// One Glauber step: pick a color and a vertex uniformly, recolor if legal.
pub fn glauber_step<R: Rng + ?Sized>(
    graph: &Graph,
    k: u16,
    coloring: &Coloring,
    rng: &mut R,
) -> Result<Coloring> {
    let kernel = GlauberKernel::new(Arc::new(graph.clone()), k)?;
    kernel.checked_step(coloring, rng)
}

/// Glauber step restricted to `subset`: the pair `(u, c)` is drawn over all
/// vertices, and the move only happens when `u` is in the subset.
pub fn restricted_glauber_step<R: Rng + ?Sized>(
    graph: &Graph,
    k: u16,
    subset: &[usize],
    coloring: &Coloring,
    rng: &mut R,
) -> Result<Coloring> {
    let kernel = GlauberKernel::restricted(Arc::new(graph.clone()), k, subset)?;
    kernel.checked_step(coloring, rng)
}

/// Glauber dynamics on proper `k`-colorings, optionally restricted to a
/// vertex subset.
#[derive(Clone, Debug)]
pub struct GlauberKernel {
    graph: Arc<Graph>,
    k: u16,
    mask: Option<Vec<bool>>,
}

impl GlauberKernel {
    pub fn new(graph: Arc<Graph>, k: u16) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        Ok(Self {
            graph,
            k,
            mask: None,
        })
    }

    pub fn restricted(graph: Arc<Graph>, k: u16, subset: &[usize]) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::EmptyRestriction);
        }
        let mut mask = vec![false; graph.n()];
        for &v in subset {
            if v >= graph.n() {
                return Err(Error::InvalidState(format!(
                    "vertex {v} outside 0..{}",
                    graph.n()
                )));
            }
            mask[v] = true;
        }
        let mut kernel = Self::new(graph, k)?;
        kernel.mask = Some(mask);
        Ok(kernel)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn k(&self) -> u16 {
        self.k
    }

    fn checked_step<R: Rng + ?Sized>(&self, coloring: &Coloring, rng: &mut R) -> Result<Coloring> {
        self.check_state(coloring)?;
        let mut next = coloring.clone();
        self.step(&mut next, rng);
        Ok(next)
    }

    /// Enumerates every proper coloring and the exact transition matrix.
    pub fn enumerate(&self, limit: u64) -> Result<EnumeratedGlauber> {
        let states = proper_colorings(&self.graph, self.k, limit)?;
        let index: HashMap<Coloring, usize> = states
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let size = states.len();
        if size == 0 {
            return Err(Error::NotErgodic(format!(
                "graph has no proper {}-coloring",
                self.k
            )));
        }
        let n = self.graph.n();
        let weight = 1.0 / (n as f64 * f64::from(self.k));
        let mut m = nalgebra::DMatrix::zeros(size, size);
        for (i, s) in states.iter().enumerate() {
            for u in 0..n {
                for c in 1..=self.k {
                    let mut colors = s.colors.clone();
                    let moved = self.mask.as_ref().is_none_or(|mask| mask[u])
                        && glauber_update(&self.graph, &mut colors, u, c);
                    let j = if moved {
                        index[&Coloring { colors, k: self.k }]
                    } else {
                        i
                    };
                    m[(i, j)] += weight;
                }
            }
        }
        for mut row in m.row_iter_mut() {
            let s = row.sum();
            row /= s;
        }
        Ok(EnumeratedGlauber {
            kernel: self.clone(),
            states,
            index,
            matrix: TransitionMatrix::new(m)?,
        })
    }
}

impl Kernel for GlauberKernel {
    type State = Coloring;

    fn step<R: Rng + ?Sized>(&self, state: &mut Coloring, rng: &mut R) {
        let u = rng.random_range(0..self.graph.n());
        let c = rng.random_range(1..=self.k);
        if self.mask.as_ref().is_none_or(|mask| mask[u]) {
            glauber_update(&self.graph, &mut state.colors, u, c);
        }
    }

    fn check_state(&self, state: &Coloring) -> Result<()> {
        if state.k != self.k {
            return Err(Error::InvalidState(format!(
                "coloring uses k = {} but the chain has k = {}",
                state.k, self.k
            )));
        }
        ensure_proper(&self.graph, state)
    }

    fn meta(&self) -> KernelMeta {
        KernelMeta {
            lazy: false,
            reversible: true,
            lambda: None,
        }
    }
}

/// Glauber dynamics together with its full state space.
#[derive(Clone, Debug)]
pub struct EnumeratedGlauber {
    kernel: GlauberKernel,
    states: Vec<Coloring>,
    index: HashMap<Coloring, usize>,
    matrix: TransitionMatrix,
}

impl EnumeratedGlauber {
    pub fn states(&self) -> &[Coloring] {
        &self.states
    }

    /// Whether single-site moves connect all proper colorings.
    pub fn is_connected(&self) -> bool {
        let size = self.states.len();
        let mut seen = vec![false; size];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(i) = queue.pop_front() {
            for j in 0..size {
                if !seen[j] && self.matrix.get(i, j) > 0.0 {
                    seen[j] = true;
                    reached += 1;
                    queue.push_back(j);
                }
            }
        }
        reached == size
    }
}

impl Kernel for EnumeratedGlauber {
    type State = Coloring;

    fn step<R: Rng + ?Sized>(&self, state: &mut Coloring, rng: &mut R) {
        self.kernel.step(state, rng)
    }

    fn check_state(&self, state: &Coloring) -> Result<()> {
        self.kernel.check_state(state)
    }

    fn meta(&self) -> KernelMeta {
        self.kernel.meta()
    }
}

impl ExplicitKernel for EnumeratedGlauber {
    fn num_states(&self) -> usize {
        self.states.len()
    }
    fn state_index(&self, state: &Coloring) -> Option<usize> {
        self.index.get(state).copied()
    }
    fn state_at(&self, index: usize) -> Coloring {
        self.states[index].clone()
    }
    fn transition_matrix(&self) -> TransitionMatrix {
        self.matrix.clone()
    }
}

fn check_enumeration(n: usize, k: u16, limit: u64) -> Result<()> {
    let total = (f64::from(k)).powi(n as i32);
    if total > limit as f64 {
        return Err(Error::EnumerationGuard { n, k, limit });
    }
    Ok(())
}

/// Depth-first walk over proper colorings, assigning vertices in order.
fn for_each_proper(graph: &Graph, k: u16, visit: &mut dyn FnMut(&[u16])) {
    fn go(graph: &Graph, k: u16, v: usize, colors: &mut Vec<u16>, visit: &mut dyn FnMut(&[u16])) {
        if v == graph.n() {
            visit(colors);
            return;
        }
        for c in 1..=k {
            if graph
                .neighbors(v)
                .iter()
                .all(|&w| w > v || colors[w] != c)
            {
                colors[v] = c;
                go(graph, k, v + 1, colors, visit);
            }
        }
        colors[v] = 0;
    }
    let mut colors = vec![0; graph.n()];
    go(graph, k, 0, &mut colors, visit);
}

fn proper_colorings(graph: &Graph, k: u16, limit: u64) -> Result<Vec<Coloring>> {
    check_enumeration(graph.n(), k, limit)?;
    let mut out = Vec::new();
    for_each_proper(graph, k, &mut |c| {
        out.push(Coloring {
            colors: c.to_vec(),
            k,
        })
    });
    Ok(out)
}

/// Exact `#Γ(G, k)` by backtracking; refuses when `k^n` exceeds
/// [`BRUTE_FORCE_LIMIT`].
pub fn brute_force_count(graph: &Graph, k: u16) -> Result<u64> {
    check_enumeration(graph.n(), k, BRUTE_FORCE_LIMIT)?;
    let mut count = 0u64;
    for_each_proper(graph, k, &mut |_| count += 1);
    Ok(count)
}

/// Exact probability, under a uniform proper coloring of `graph`, that the
/// predicate holds.
pub fn exact_probability(
    graph: &Graph,
    k: u16,
    predicate: &dyn Fn(&[u16]) -> bool,
) -> Result<f64> {
    check_enumeration(graph.n(), k, BRUTE_FORCE_LIMIT)?;
    let (mut hits, mut total) = (0u64, 0u64);
    for_each_proper(graph, k, &mut |c| {
        total += 1;
        if predicate(c) {
            hits += 1;
        }
    });
    if total == 0 {
        return Err(Error::NotErgodic(format!("graph has no proper {k}-coloring")));
    }
    Ok(hits as f64 / total as f64)
}

/// Smallest-available-color assignment in vertex order.
pub fn greedy_coloring(graph: &Graph, k: u16) -> Result<Coloring> {
    let mut colors = vec![0u16; graph.n()];
    for v in 0..graph.n() {
        let c = (1..=k)
            .find(|&c| graph.neighbors(v).iter().all(|&w| colors[w] != c))
            .ok_or(Error::ErgodicityFloor {
                k,
                d_max: graph.max_degree(),
            })?;
        colors[v] = c;
    }
    Ok(Coloring { colors, k })
}

/// Accepts `(graph, k)` when `k >= d_max + 2`, or when the instance is small
/// enough to verify exactly that Glauber moves connect all proper colorings.
pub fn check_ergodicity(graph: &Graph, k: u16) -> Result<()> {
    let d_max = graph.max_degree();
    if usize::from(k) >= d_max + 2 {
        return Ok(());
    }
    let floor = Error::ErgodicityFloor { k, d_max };
    if check_enumeration(graph.n(), k, EXACT_CONNECTIVITY_LIMIT).is_err() {
        return Err(floor);
    }
    let kernel = GlauberKernel::new(Arc::new(graph.clone()), k)?;
    match kernel.enumerate(EXACT_CONNECTIVITY_LIMIT) {
        Ok(e) if e.is_connected() => Ok(()),
        _ => Err(floor),
    }
}

/// Order in which edges are added.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeOrder {
    Input,
    Shuffled(u64),
}

/// One factor of the telescoping product.
#[derive(Clone, Debug)]
pub struct PhaseSpec {
    /// 1-based phase index.
    pub index: usize,
    /// Edge added at this phase.
    pub edge: (usize, usize),
    /// The graph with every earlier edge but without `edge`.
    pub sampling_graph: Arc<Graph>,
}

impl PhaseSpec {
    /// `f_i(γ) = 1` iff `γ(u) ≠ γ(v)`.
    pub fn indicator(&self) -> ScalarFunction<Coloring> {
        let (u, v) = self.edge;
        ScalarFunction::new(0.0, 1.0, move |c: &Coloring| {
            if c.colors[u] != c.colors[v] {
                1.0
            } else {
                0.0
            }
        })
        .expect("valid range")
    }
}

/// The edge order and the phases it induces.
pub fn build_phase_sequence(graph: &Graph, order: EdgeOrder) -> Vec<PhaseSpec> {
    let mut edges = graph.edges().to_vec();
    if let EdgeOrder::Shuffled(seed) = order {
        edges.shuffle(&mut rng::stream(seed));
    }
    (0..edges.len())
        .map(|i| PhaseSpec {
            index: i + 1,
            edge: edges[i],
            sampling_graph: Arc::new(graph.with_edges(&edges[..i]).expect("subset of valid edges")),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeanEstimator {
    Dynamite,
    StaticHoeffding,
}

/// Source of the per-phase eigenvalue bound of (non-lazy) Glauber dynamics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaPolicy {
    /// `1 - 1/(n² k)`; flagged as defaulted in the result.
    Heuristic,
    /// A caller-supplied bound for Glauber dynamics.
    Fixed(f64),
    /// Exact second eigenvalue of the lazified chain, by enumeration.
    Exact,
}

pub fn heuristic_lambda(n: usize, k: u16) -> f64 {
    1.0 - 1.0 / ((n * n).max(1) as f64 * f64::from(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JvvConfig {
    pub estimator: MeanEstimator,
    pub lambda: LambdaPolicy,
    pub edge_order: EdgeOrder,
    pub seed: u64,
}

impl JvvConfig {
    pub fn new(estimator: MeanEstimator, seed: u64) -> Self {
        Self {
            estimator,
            lambda: LambdaPolicy::Heuristic,
            edge_order: EdgeOrder::Input,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseReport {
    pub index: usize,
    pub edge: (usize, usize),
    pub ratio: f64,
    /// Bound used for the lazified phase chain.
    pub lambda_bound: f64,
    pub report: EstimateReport,
}

/// Output of [`jvv_count`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountResult {
    pub vertices: usize,
    pub k: u16,
    /// Natural log of the estimate.
    pub log_estimate: f64,
    pub estimate: f64,
    pub estimate_decimal: String,
    pub phases: Vec<PhaseReport>,
    pub edge_order: Vec<(usize, usize)>,
    pub total_steps: u64,
    pub phase_epsilon: f64,
    pub phase_delta: f64,
    /// Relative error implied by the per-phase additive guarantees, assuming
    /// every true ratio is at least 1/2: `(1 + 2ε/I)^I - 1`.
    pub relative_error_bound: f64,
    pub lambda_defaulted: bool,
    pub estimator: MeanEstimator,
}

impl CountResult {
    pub fn ratios(&self) -> Vec<f64> {
        self.phases.iter().map(|p| p.ratio).collect()
    }
}

/// `k^n · Π ratios`, in linear space when it fits and from logs otherwise.
pub fn telescoping_product(n: usize, k: u16, ratios: &[f64]) -> (f64, f64) {
    let log = n as f64 * f64::from(k).ln() + ratios.iter().map(|r| r.ln()).sum::<f64>();
    let linear = f64::from(k).powi(n as i32) * ratios.iter().product::<f64>();
    if linear.is_finite() && linear > 0.0 {
        (log, linear)
    } else {
        (log, log.exp())
    }
}

/// Decimal rendering of `exp(log_value)` that survives huge magnitudes.
pub fn render_decimal(log_value: f64, linear: f64) -> String {
    if linear.is_finite() && linear < 1e15 {
        let s = format!("{linear:.6}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        return s.to_string();
    }
    let log10 = log_value / std::f64::consts::LN_10;
    let exponent = log10.floor();
    let mantissa = 10f64.powf(log10 - exponent);
    format!("{mantissa:.6}e+{}", exponent as i64)
}

/// Approximate `#Γ(G, k)` with one mean estimate per edge.
///
/// Each phase estimates its ratio to additive precision `ε/I` with failure
/// probability `δ/I` (`I = #E`), on lazified Glauber dynamics of its
/// sampling graph, warm-started from a greedy coloring with `π_min = k^{-n}`.
pub fn jvv_count(
    graph: &Graph,
    k: u16,
    epsilon: f64,
    delta: f64,
    config: &JvvConfig,
) -> Result<CountResult> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::NonPositiveEpsilon(epsilon));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidDelta(delta));
    }
    if let LambdaPolicy::Fixed(l) = config.lambda {
        if !(0.0..1.0).contains(&l) {
            return Err(Error::InvalidLambda(l));
        }
    }
    if usize::from(k) < graph.max_degree() + 2
        && check_enumeration(graph.n(), k, EXACT_CONNECTIVITY_LIMIT).is_err()
    {
        return Err(Error::ErgodicityFloor {
            k,
            d_max: graph.max_degree(),
        });
    }
    let phases = build_phase_sequence(graph, config.edge_order);
    for phase in &phases {
        check_ergodicity(&phase.sampling_graph, k)?;
    }
    let count = phases.len().max(1) as f64;
    let phase_epsilon = epsilon / count;
    let phase_delta = delta / count;

    let reports: Vec<PhaseReport> = phases
        .par_iter()
        .map(|phase| run_phase(phase, k, phase_epsilon, phase_delta, config))
        .collect::<Result<_>>()?;

    let ratios: Vec<f64> = reports.iter().map(|p| p.ratio).collect();
    let (log_estimate, estimate) = telescoping_product(graph.n(), k, &ratios);
    let total_steps = reports.iter().map(|p| p.report.total_steps).sum();
    let i = phases.len() as f64;
    let relative_error_bound = if phases.is_empty() {
        0.0
    } else {
        (1.0 + 2.0 * epsilon / i).powf(i) - 1.0
    };
    Ok(CountResult {
        vertices: graph.n(),
        k,
        log_estimate,
        estimate,
        estimate_decimal: render_decimal(log_estimate, estimate),
        edge_order: phases.iter().map(|p| p.edge).collect(),
        phases: reports,
        total_steps,
        phase_epsilon,
        phase_delta,
        relative_error_bound,
        lambda_defaulted: config.lambda == LambdaPolicy::Heuristic && !phases.is_empty(),
        estimator: config.estimator,
    })
}

fn phase_lambda(graph: &Arc<Graph>, k: u16, policy: LambdaPolicy) -> Result<f64> {
    match policy {
        LambdaPolicy::Heuristic => Ok((1.0 + heuristic_lambda(graph.n(), k)) / 2.0),
        LambdaPolicy::Fixed(l) => Ok((1.0 + l) / 2.0),
        LambdaPolicy::Exact => {
            let exact = GlauberKernel::new(Arc::clone(graph), k)?.enumerate(EXACT_CONNECTIVITY_LIMIT)?;
            let matrix = lazify(&exact).transition_matrix();
            Ok(SpectralOracle::with_cap(&matrix, usize::MAX)?.lambda())
        }
    }
}

fn run_phase(
    phase: &PhaseSpec,
    k: u16,
    epsilon: f64,
    delta: f64,
    config: &JvvConfig,
) -> Result<PhaseReport> {
    let graph = &phase.sampling_graph;
    let lambda = phase_lambda(graph, k, config.lambda)?;
    let kernel = lazify(GlauberKernel::new(Arc::clone(graph), k)?);
    let start = greedy_coloring(graph, k)?;
    let f = phase.indicator();
    let seed = rng::derive_indexed(config.seed, "phase", phase.index as u64);
    let ln_inv_pi_min = graph.n() as f64 * f64::from(k).ln();

    let report = match config.estimator {
        MeanEstimator::Dynamite => {
            dynamite::warm_start_log(&start, &kernel, lambda, ln_inv_pi_min, &f, epsilon, delta, seed)?
        }
        MeanEstimator::StaticHoeffding => {
            static_hoeffding_report(&kernel, &start, lambda, ln_inv_pi_min, &f, epsilon, delta, seed)?
        }
    };
    if !(report.estimate > 0.0) {
        return Err(Error::PhaseRatioNonPositive {
            phase: phase.index,
            estimate: report.estimate,
        });
    }
    Ok(PhaseReport {
        index: phase.index,
        edge: phase.edge,
        ratio: report.estimate,
        lambda_bound: lambda,
        report,
    })
}

/// Warm-up for the uniform mixing time bound, then a single trace of
/// `m_H(Λ, R, ε, δ)` steps.
#[allow(clippy::too_many_arguments)]
pub fn static_hoeffding_report<K: Kernel>(
    kernel: &K,
    start: &K::State,
    lambda: f64,
    ln_inv_pi_min: f64,
    f: &ScalarFunction<K::State>,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<EstimateReport> {
    let params = ConcentrationParams::new(lambda, f.span(), delta, 1)?;
    let samples = hoeffding_sample_complexity(&params, epsilon)?.max(1);
    let warmup = dynamite::uniform_mixing_steps_log(lambda, ln_inv_pi_min)?;
    let proxy = f.span().powi(2) / 4.0;
    dynamite::fixed_budget(kernel, start, samples, warmup, lambda, f, epsilon, delta, proxy, seed)
}
