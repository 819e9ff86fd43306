//! Approximate coloring counts checked against brute force.

use dynamite::coloring::{brute_force_count, jvv_count, Graph, JvvConfig, MeanEstimator};

fn main() -> dynamite::Result<()> {
    let cases = [
        ("single edge", Graph::path(2), 2u16),
        ("C4", Graph::cycle(4)?, 3),
        ("K3", Graph::complete(3), 4),
        ("P5", Graph::path(5), 4),
    ];
    for (name, graph, k) in cases {
        let exact = brute_force_count(&graph, k)?;
        let r = jvv_count(&graph, k, 0.25, 0.25, &JvvConfig::new(MeanEstimator::Dynamite, 11))?;
        println!(
            "{name:<12} k={k}  exact={exact:<5} estimate={:<10} ratios={:?} steps={}{}",
            r.estimate_decimal,
            r.ratios().iter().map(|x| (x * 1e3).round() / 1e3).collect::<Vec<_>>(),
            r.total_steps,
            if r.lambda_defaulted { " (heuristic eigenvalue bound)" } else { "" }
        );
    }
    Ok(())
}
