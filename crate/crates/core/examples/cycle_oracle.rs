//! Exact spectral analysis of the lazy cycle walk.
//!
//! Prints the eigenvalue gap, the stationary variance of each block
//! function, and how the trace variance at `T = n²` separates them.
//!
//! ```text
//! cargo run --example cycle_oracle -- 16
//! ```

use dynamite::chain::{make_cycle, make_cycle_function};
use dynamite::spectral::{cycle_separation_profile, SpectralOracle};

fn main() -> dynamite::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(16);
    let cycle = make_cycle(n)?;
    let oracle = SpectralOracle::new(cycle.matrix())?;
    println!("cycle n={n}: lambda={:.6} tau_rel={:.2}", oracle.lambda(), oracle.relaxation_time());

    let f = make_cycle_function(n, 1)?;
    for t in [1, 4, 16, n * n] {
        let s = oracle.sandwich(&f, t)?;
        println!(
            "  f_1  T={t:4}  {:.3e} <= v_T={:.3e} <= {:.3e}  ({})",
            s.lower,
            s.trace_variance,
            s.upper,
            if s.holds { "ok" } else { "VIOLATED" }
        );
    }

    println!("separation at T = n^2:");
    for row in cycle_separation_profile(n, n * n)? {
        println!("  i={:3}  v_T={:.6}", row.half_width, row.trace_variance);
    }
    Ok(())
}
