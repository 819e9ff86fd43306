//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary so the lines are always printed. Exits nonzero
//! when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use dynamite::bench::{compare, BenchConfig, BenchProblem, ChainProblem, Method};
use dynamite::chain::{
    lazify, make_cycle, make_cycle_function, project_chain, ExplicitKernel, Kernel, MatrixKernel,
    ScalarFunction, TransitionMatrix,
};
use dynamite::coloring::{
    brute_force_count, build_phase_sequence, jvv_count, telescoping_product, EdgeOrder,
    GlauberKernel, Graph, JvvConfig, MeanEstimator,
};
use dynamite::dynamite::build_schedule;
use dynamite::estimators::{
    hoeffding_sample_complexity, two_chain_variance, ConcentrationParams, PairedEvaluations,
};
use dynamite::planted::{cut_set, generate, PlantedParams};
use dynamite::rng;
use dynamite::spectral::{cycle_separation_profile, SpectralOracle};

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

/// Explicit lazy reversible fixtures with a function on each.
fn lazy_reversible_fixtures() -> Vec<(String, TransitionMatrix, ScalarFunction<usize>)> {
    let mut out = Vec::new();
    for n in [4, 6, 8, 16] {
        let c = make_cycle(n).unwrap();
        for i in (1..=n / 2).filter(|i| n % (2 * i) == 0) {
            out.push((format!("cycle{n}-f{i}"), c.matrix().clone(), make_cycle_function(n, i).unwrap()));
        }
    }
    out.push((
        "uniform2".into(),
        MatrixKernel::uniform(2).unwrap().matrix().clone(),
        ScalarFunction::indicator(2, &[1]).unwrap(),
    ));
    let parity = project_chain(&make_cycle(8).unwrap(), &[0, 1, 0, 1, 0, 1, 0, 1]).unwrap();
    out.push(("cycle8-parity".into(), parity.matrix().clone(), ScalarFunction::indicator(2, &[1]).unwrap()));
    for seed in 0..4 {
        let m = random_lazy_reversible(5, seed);
        let f = ScalarFunction::from_values(vec![0.0, 0.3, 1.0, 0.7, 0.1], 0.0, 1.0).unwrap();
        out.push((format!("random5-s{seed}"), m, f));
    }
    let glauber = lazify(
        GlauberKernel::new(std::sync::Arc::new(Graph::path(3)), 3)
            .unwrap()
            .enumerate(1_000)
            .unwrap(),
    );
    let states: Vec<usize> = (0..glauber.num_states())
        .filter(|&s| glauber.state_at(s).color(0) != glauber.state_at(s).color(2))
        .collect();
    out.push((
        "glauber-p3-k3".into(),
        glauber.transition_matrix(),
        ScalarFunction::indicator(glauber.num_states(), &states).unwrap(),
    ));
    out
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in [4, 6, 8] {
        let c = make_cycle(n).unwrap();
        let oracle = SpectralOracle::new(c.matrix()).unwrap();
        let p = rows(c.matrix());
        let pi = power_stationary(&p);
        for i in (1..=n / 2).filter(|i| n % (2 * i) == 0) {
            let f = make_cycle_function(n, i).unwrap();
            let values = f.values(n);
            for t in 1..=3 {
                let closed = oracle.trace_variance(&f, t).unwrap().trace_variance;
                let brute = enumerate_trace_variance(&p, &pi, &values, t);
                worst = worst.max((closed - brute).abs());
                cases += 1;
            }
        }
    }
    outcome(worst <= 1e-12, format!("{cases} cases, max |closed - enumerated| = {worst:.2e} (tol 1e-12)"))
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for (name, m, f) in lazy_reversible_fixtures() {
        let oracle = SpectralOracle::new(&m).unwrap();
        for t in 1..=64 {
            let s = oracle.sandwich(&f, t).unwrap();
            checked += 1;
            if !s.holds {
                failures.push(format!("{name}@T={t}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{checked} (fixture, T) pairs, violations: {failures:?}"),
    )
}

fn criterion_3() -> Outcome {
    let mut worst_drop: f64 = 0.0;
    let mut fixtures = 0;
    for (_, m, f) in lazy_reversible_fixtures() {
        let oracle = SpectralOracle::new(&m).unwrap();
        let sweep = oracle.trace_variance_sweep(&f, 64);
        let scaled: Vec<f64> = sweep.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v).collect();
        for w in scaled.windows(2) {
            worst_drop = worst_drop.max(w[0] - w[1]);
        }
        fixtures += 1;
    }
    outcome(
        worst_drop <= 1e-10,
        format!("{fixtures} fixtures, T=1..64, largest decrease of T*v_T = {worst_drop:.2e} (slack 1e-10)"),
    )
}

fn criterion_4() -> Outcome {
    let c = make_cycle(8).unwrap();
    let f = make_cycle_function(8, 1).unwrap();
    let pi = vec![1.0 / 8.0; 8];
    let runs = 10_000u64;
    let mut total = 0.0;
    for run in 0..runs {
        let seed = rng::derive_indexed(4, "unbiased", run);
        let sa = rng::derive_seed(seed, rng::label::CHAIN_A);
        let sb = rng::derive_seed(seed, rng::label::CHAIN_B);
        let mut start = rng::stream(rng::derive_seed(seed, rng::label::START));
        let (mut a, mut b) = (
            dynamite::chain::sample_index(&pi, &mut start),
            dynamite::chain::sample_index(&pi, &mut start),
        );
        let (mut ra, mut rb) = (rng::stream(sa), rng::stream(sb));
        let mut pairs = PairedEvaluations::new(0.0, 1.0, [sa, sb]).unwrap();
        for _ in 0..16 {
            c.step(&mut a, &mut ra);
            c.step(&mut b, &mut rb);
            pairs.push(f.eval(&a), f.eval(&b)).unwrap();
        }
        total += two_chain_variance(&pairs).unwrap();
    }
    let mean = total / runs as f64;
    outcome((mean - 0.25).abs() <= 0.01, format!("mean of v-hat over {runs} runs = {mean:.5} (target 0.25 +/- 0.01)"))
}

fn criterion_5() -> Outcome {
    let problems = [
        ChainProblem::cycle(8, 1).unwrap(),
        ChainProblem::new(
            "uniform2",
            MatrixKernel::uniform(2).unwrap(),
            ScalarFunction::indicator(2, &[1]).unwrap(),
        )
        .unwrap(),
    ];
    let (epsilon, delta, replicates) = (0.05, 0.1, 200u64);
    let mut pass = true;
    let mut parts = Vec::new();
    for p in &problems {
        let lambda = p.oracle_lambda().unwrap();
        let truth = p.truth();
        for method in [Method::McmcPro, Method::Dynamite, Method::WarmStart] {
            let covered = (0..replicates)
                .filter(|&r| {
                    let seed = rng::derive_indexed(5, method.name(), r);
                    let est = p.run(method, lambda, epsilon, delta, seed).unwrap().estimate;
                    (est - truth).abs() <= epsilon
                })
                .count() as u64;
            let coverage = covered as f64 / replicates as f64;
            let p_value = binomial_upper_tail(replicates, 0.1, replicates - covered);
            pass &= coverage >= 0.90 && p_value >= 0.05;
            parts.push(format!("{}/{}: {coverage:.3} (p={p_value:.3})", p.name, method.name()));
        }
    }
    outcome(pass, parts.join(", "))
}

fn criterion_6() -> Outcome {
    let profile = cycle_separation_profile(16, 256).unwrap();
    let values: Vec<f64> = profile.iter().map(|r| r.trace_variance).collect();
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let ratio = values.last().unwrap() / values[0];
    outcome(
        increasing && ratio >= 8.0,
        format!(
            "v_256 by half-width {:?} = {:?}, ratio f_8/f_1 = {ratio:.2} (need >= 8)",
            profile.iter().map(|r| r.half_width).collect::<Vec<_>>(),
            values.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, graph, k, exact) in [
        ("C4", Graph::cycle(4).unwrap(), 3u16, 18.0),
        ("edge", Graph::path(2), 2, 2.0),
    ] {
        let hits = (0..50u64)
            .filter(|&s| {
                let r = jvv_count(&graph, k, 0.25, 0.25, &JvvConfig::new(MeanEstimator::Dynamite, s)).unwrap();
                ((r.estimate - exact) / exact).abs() <= 0.30
            })
            .count();
        pass &= hits >= 45;
        parts.push(format!("{name} k={k}: {hits}/50 within 30%"));
    }
    outcome(pass, parts.join(", "))
}

/// `k^n · Π hits_i / total_i` as an exact rational, with every ratio taken
/// by full enumeration over the phase's sampling graph.
fn exact_telescoping(graph: &Graph, k: u16) -> (u128, u128, Vec<f64>) {
    let (mut num, mut den) = ((k as u128).pow(graph.n() as u32), 1u128);
    let mut ratios = Vec::new();
    for phase in build_phase_sequence(graph, EdgeOrder::Input) {
        let all = brute_colorings(graph.n(), phase.sampling_graph.edges(), k);
        let (u, v) = phase.edge;
        let hits = all.iter().filter(|c| c[u] != c[v]).count() as u128;
        let total = all.len() as u128;
        ratios.push(hits as f64 / total as f64);
        num *= hits;
        den *= total;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    (num, den, ratios)
}

fn criterion_8() -> Outcome {
    let planted = generate(&PlantedParams::new(8, 2, 0.5, 0.3, 8).unwrap()).unwrap().graph;
    let k_planted = (planted.max_degree() + 2).min(9) as u16;
    let cases = [
        ("K3", Graph::complete(3), 3u16),
        ("P3", Graph::path(3), 3),
        ("C4", Graph::cycle(4).unwrap(), 3),
        ("planted8", planted, k_planted),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, g, k) in cases {
        let count = brute_force_count(&g, k).unwrap() as u128;
        let (num, den, ratios) = exact_telescoping(&g, k);
        let exact_ok = den == 1 && num == count;
        let (_, linear) = telescoping_product(g.n(), k, &ratios);
        let float_ok = (linear - count as f64).abs() <= 1e-9 * count as f64;
        pass &= exact_ok && float_ok;
        parts.push(format!("{name} k={k}: {num}/{den} vs {count}"));
    }
    outcome(pass, parts.join(", "))
}

fn criterion_9() -> Outcome {
    let (mut total, mut count) = (0usize, 0usize);
    for seed in 0..500 {
        let pg = generate(&PlantedParams::new(64, 4, 0.5, 0.05, seed).unwrap()).unwrap();
        for j in 0..4 {
            total += cut_set(&pg, j).unwrap().len();
            count += 1;
        }
    }
    let mean = total as f64 / count as f64;
    outcome(
        (mean - 12.8).abs() <= 0.05 * 12.8,
        format!("mean |B(C_j)| over 500 seeds = {mean:.3} (target 12.8 +/- 0.64)"),
    )
}

fn criterion_10() -> Outcome {
    let (epsilon, delta) = (0.02, 0.1);
    let config = BenchConfig {
        problems: vec![BenchProblem::Cycle { n: 16, half_width: 1 }],
        methods: vec![Method::Dynamite],
        batches: 20,
        replicates: 1,
        epsilon,
        delta,
        count_epsilon: 0.25,
        count_delta: 0.25,
        seed: 10,
    };
    let rows = compare(&config).unwrap();
    let mut steps: Vec<u64> = rows.iter().map(|r| r.steps).collect();
    let median = dynamite::bench::median(&mut steps);
    let lambda = rows[0].lambda;
    let budget = hoeffding_sample_complexity(&ConcentrationParams::new(lambda, 1.0, delta, 1).unwrap(), epsilon).unwrap();
    outcome(
        median < budget,
        format!(
            "median dynamite steps = {median}, Hoeffding budget m_H = {budget}, ratio = {:.3}",
            median as f64 / budget as f64
        ),
    )
}

fn criterion_11() -> Outcome {
    let s = build_schedule(1.0, 1.0 / 64.0, 0.0, 0.1).unwrap();
    let fixture = s.iterations == 5
        && s.sizes == vec![642, 1283, 2566, 5131, 10262]
        && (s.alpha - 64.0 * 150f64.ln()).abs() < 1e-9;
    let clamps = [(1.0, 0.5), (1.0, 0.7), (0.5, 0.25), (2.0, 1.5)]
        .iter()
        .all(|&(r, e)| build_schedule(r, e, 0.3, 0.1).unwrap().iterations == 1);
    outcome(
        fixture && clamps,
        format!("I = {}, m = {:?}, alpha = {:.4}; clamp cases give I = 1: {clamps}", s.iterations, s.sizes, s.alpha),
    )
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "closed-form trace variance equals trace enumeration", budget: Some(Duration::from_secs(10)), run: criterion_1 },
        Criterion { id: 2, name: "sandwich bound on lazy reversible fixtures", budget: Some(Duration::from_secs(30)), run: criterion_2 },
        Criterion { id: 3, name: "T * v_T nondecreasing", budget: None, run: criterion_3 },
        Criterion { id: 4, name: "two-chain variance estimator is unbiased", budget: Some(Duration::from_secs(60)), run: criterion_4 },
        Criterion { id: 5, name: "coverage of mcmc-pro, dynamite and warm start", budget: Some(Duration::from_secs(600)), run: criterion_5 },
        Criterion { id: 6, name: "cycle separation at T = n^2", budget: Some(Duration::from_secs(10)), run: criterion_6 },
        Criterion { id: 7, name: "coloring counts within 30% of brute force", budget: Some(Duration::from_secs(900)), run: criterion_7 },
        Criterion { id: 8, name: "telescoping product is exact", budget: None, run: criterion_8 },
        Criterion { id: 9, name: "planted cut-set size", budget: Some(Duration::from_secs(30)), run: criterion_9 },
        Criterion { id: 10, name: "dynamite median steps below the Hoeffding budget", budget: None, run: criterion_10 },
        Criterion { id: 11, name: "schedule algebra", budget: None, run: criterion_11 },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let started = Instant::now();
        let result = (c.run)();
        let elapsed = started.elapsed();
        let in_time = c.budget.is_none_or(|b| elapsed <= b);
        let pass = result.pass && in_time;
        let budget = c.budget.map_or(String::new(), |b| format!(" / {}s", b.as_secs()));
        println!(
            "criterion {:>2} [{}] {}: {} ({:.2}s{budget})",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.name,
            result.detail,
            elapsed.as_secs_f64()
        );
        if !pass {
            failed.push(c.id);
        }
    }
    println!(
        "acceptance: {}/{} passed{}",
        criteria.len() - failed.len(),
        criteria.len(),
        if failed.is_empty() { String::new() } else { format!(", failed: {failed:?}") }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
