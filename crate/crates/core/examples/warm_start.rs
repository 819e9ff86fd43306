//! Warm-started estimation from a fixed state, with every base-chain step
//! counted.

use dynamite::chain::{make_cycle, make_cycle_function, CountingKernel, Kernel};
use dynamite::dynamite::warm_start;

fn main() -> dynamite::Result<()> {
    let n = 8;
    let kernel = CountingKernel::new(make_cycle(n)?);
    let f = make_cycle_function(n, 2)?;
    let lambda = kernel.meta().lambda.expect("cycle declares its eigenvalue");

    let report = warm_start(&0, &kernel, lambda, 1.0 / n as f64, &f, 0.05, 0.1, 2024)?;
    println!("estimate      {:.4} (true 0.5)", report.estimate);
    println!("trace length  {}", report.trace_length);
    println!("warm-up steps {}", report.warmup_steps);
    println!("total steps   {}", report.total_steps);
    println!("counted steps {}", kernel.steps());
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
