//! Planted-partition graphs and loose-connectedness diagnostics.
//!
//! Vertices are split into `r` equal communities of consecutive indices.
//! Pairs inside a community are joined with probability `p`, pairs across
//! communities with probability `q / (r - 1)`.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{lazify, Kernel};
use crate::coloring::{
    check_ergodicity, exact_probability, greedy_coloring, heuristic_lambda, GlauberKernel, Graph,
    BRUTE_FORCE_LIMIT,
};
use crate::dynamite::uniform_mixing_steps_log;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedParams {
    pub n: usize,
    pub r: usize,
    /// Within-community edge probability.
    pub p: f64,
    /// Total cross-community mass; each cross pair gets `q / (r - 1)`.
    pub q: f64,
    pub seed: u64,
}

impl PlantedParams {
    pub fn new(n: usize, r: usize, p: f64, q: f64, seed: u64) -> Result<Self> {
        let params = Self { n, r, p, q, seed };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.n % self.r != 0 {
            return Err(Error::CommunitiesDontDivide {
                n: self.n,
                r: self.r,
            });
        }
        for (name, value) in [("p", self.p), ("q", self.q)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidProbability { name, value });
            }
        }
        if self.r == 1 && self.q > 0.0 {
            return Err(Error::InvalidParameter(
                "a single community admits no cross edges, so q must be 0".into(),
            ));
        }
        let cross = self.cross_probability();
        if !(0.0..=1.0).contains(&cross) {
            return Err(Error::InvalidProbability {
                name: "q/(r-1)",
                value: cross,
            });
        }
        Ok(())
    }

    pub fn community_size(&self) -> usize {
        self.n / self.r
    }

    /// Probability of each cross-community pair.
    pub fn cross_probability(&self) -> f64 {
        if self.r <= 1 {
            0.0
        } else {
            self.q / (self.r - 1) as f64
        }
    }

    /// `E|B(C_j)| = (n/r)(n - n/r) q/(r-1) = n² q / r²`.
    pub fn expected_cut_size(&self) -> f64 {
        let s = self.community_size() as f64;
        s * (self.n as f64 - s) * self.cross_probability()
    }
}

/// A graph together with its planted communities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionedGraph {
    pub graph: Graph,
    /// Community index of each vertex, in `0..r`.
    pub communities: Vec<usize>,
    pub r: usize,
}

impl PartitionedGraph {
    pub fn new(graph: Graph, communities: Vec<usize>, r: usize) -> Result<Self> {
        if communities.len() != graph.n() {
            return Err(Error::PartitionSize {
                expected: graph.n(),
                got: communities.len(),
            });
        }
        if let Some(&index) = communities.iter().find(|&&c| c >= r) {
            return Err(Error::InvalidCommunity { index, r });
        }
        Ok(Self {
            graph,
            communities,
            r,
        })
    }

    pub fn members(&self, j: usize) -> Vec<usize> {
        (0..self.graph.n())
            .filter(|&v| self.communities[v] == j)
            .collect()
    }
}

/// Draws a planted-partition graph from `params.seed`.
pub fn generate(params: &PlantedParams) -> Result<PartitionedGraph> {
    generate_with(params, &mut rng::stream(params.seed))
}

pub fn generate_with<R: Rng + ?Sized>(params: &PlantedParams, rng: &mut R) -> Result<PartitionedGraph> {
    params.validate()?;
    let size = params.community_size();
    let communities: Vec<usize> = (0..params.n).map(|v| v / size).collect();
    let cross = params.cross_probability();
    let mut edges = Vec::new();
    for u in 0..params.n {
        for v in u + 1..params.n {
            let prob = if communities[u] == communities[v] {
                params.p
            } else {
                cross
            };
            if rng.random_bool(prob) {
                edges.push((u, v));
            }
        }
    }
    PartitionedGraph::new(Graph::new(params.n, edges)?, communities, params.r)
}

/// Edges with exactly one endpoint in community `j`.
pub fn cut_set(pg: &PartitionedGraph, j: usize) -> Result<Vec<(usize, usize)>> {
    if j >= pg.r {
        return Err(Error::InvalidCommunity { index: j, r: pg.r });
    }
    Ok(pg
        .graph
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| (pg.communities[u] == j) != (pg.communities[v] == j))
        .collect())
}

/// The graph with the cut set of community `j` removed.
pub fn cut_removed(pg: &PartitionedGraph, j: usize) -> Result<Graph> {
    let cut = cut_set(pg, j)?;
    let kept: Vec<_> = pg
        .graph
        .edges()
        .iter()
        .copied()
        .filter(|e| !cut.contains(e))
        .collect();
    pg.graph.with_edges(&kept)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZetaMode {
    /// Enumerate all proper colorings.
    Exact,
    /// Draw this many approximately uniform colorings.
    Sampled(u64),
    /// Exact when `k^n` is within brute-force range, sampled otherwise.
    Auto(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZetaEstimate {
    /// Frequency of a monochromatic cut edge.
    pub value: f64,
    /// 95% normal-approximation binomial radius; zero in exact mode.
    pub radius: f64,
    /// Binomial standard error; zero in exact mode.
    pub standard_error: f64,
    pub samples: u64,
    pub exact: bool,
    pub cut_size: usize,
    /// Glauber steps spent between consecutive samples.
    pub thinning: u64,
}

/// Probability that some edge of `B(C_j)` is monochromatic under a uniform
/// proper coloring of the cut-removed graph.
///
/// Sampled mode runs lazy Glauber dynamics from a greedy coloring and keeps
/// one state every `ln(k^n) / ln(1/Λ)` steps, `Λ` the lazified heuristic
/// bound, after a warm-up of the same length.
pub fn zeta_estimate(
    pg: &PartitionedGraph,
    j: usize,
    k: u16,
    mode: ZetaMode,
    seed: u64,
) -> Result<ZetaEstimate> {
    let cut = cut_set(pg, j)?;
    let reduced = cut_removed(pg, j)?;
    let monochromatic = |colors: &[u16]| cut.iter().any(|&(u, v)| colors[u] == colors[v]);
    let samples = match mode {
        ZetaMode::Exact => 0,
        ZetaMode::Sampled(s) | ZetaMode::Auto(s) => s,
    };
    if samples == 0 && mode != ZetaMode::Exact {
        return Err(Error::InvalidParameter("sample count must be at least 1".into()));
    }
    if cut.is_empty() {
        return Ok(ZetaEstimate {
            value: 0.0,
            radius: 0.0,
            standard_error: 0.0,
            samples,
            exact: true,
            cut_size: 0,
            thinning: 0,
        });
    }
    let in_range = (f64::from(k)).powi(reduced.n() as i32) <= BRUTE_FORCE_LIMIT as f64;
    let exact = match mode {
        ZetaMode::Exact => true,
        ZetaMode::Sampled(_) => false,
        ZetaMode::Auto(_) => in_range,
    };
    check_ergodicity(&reduced, k)?;
    if exact {
        return Ok(ZetaEstimate {
            value: exact_probability(&reduced, k, &monochromatic)?,
            radius: 0.0,
            standard_error: 0.0,
            samples: 0,
            exact: true,
            cut_size: cut.len(),
            thinning: 0,
        });
    }

    let lambda = (1.0 + heuristic_lambda(reduced.n(), k)) / 2.0;
    let thinning = uniform_mixing_steps_log(lambda, reduced.n() as f64 * f64::from(k).ln())?.max(1);
    let kernel = lazify(GlauberKernel::new(Arc::new(reduced.clone()), k)?);
    let mut state = greedy_coloring(&reduced, k)?;
    let mut rng = rng::stream(rng::derive_seed(seed, rng::label::WARM_UP));
    for _ in 0..thinning {
        kernel.step(&mut state, &mut rng);
    }
    let mut hits = 0u64;
    for _ in 0..samples {
        for _ in 0..thinning {
            kernel.step(&mut state, &mut rng);
        }
        if monochromatic(state.colors()) {
            hits += 1;
        }
    }
    let value = hits as f64 / samples as f64;
    let standard_error = (value * (1.0 - value) / samples as f64).sqrt();
    Ok(ZetaEstimate {
        value,
        radius: 1.96 * standard_error,
        standard_error,
        samples,
        exact: false,
        cut_size: cut.len(),
        thinning,
    })
}
