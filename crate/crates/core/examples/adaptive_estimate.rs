//! Adaptive estimation from stationary starts.
//!
//! Runs the plain progressive estimator and its trace-chain variant on the
//! cycle, and sets their step counts against the fixed Hoeffding budget.

use dynamite::bench::{ChainProblem, Method};
use dynamite::estimators::{hoeffding_sample_complexity, ConcentrationParams};

fn main() -> dynamite::Result<()> {
    let (epsilon, delta) = (0.02, 0.1);
    for i in [1, 8] {
        let problem = ChainProblem::cycle(16, i)?;
        let lambda = problem.oracle_lambda()?;
        let budget = hoeffding_sample_complexity(&ConcentrationParams::new(lambda, 1.0, delta, 1)?, epsilon)?;
        println!("{} (mean {:.3}), Hoeffding budget {budget}", problem.name, problem.truth());
        for method in [Method::McmcPro, Method::Dynamite] {
            let r = problem.run(method, lambda, epsilon, delta, 7)?;
            let last = r.iterations.last().expect("at least one round");
            println!(
                "  {:<9} estimate={:.4} steps={:>8} T={:<3} rounds={} radius={:.4} ({:?})",
                method.name(),
                r.estimate,
                r.total_steps,
                r.trace_length,
                r.iterations.len(),
                last.radius,
                r.termination
            );
        }
    }
    Ok(())
}
