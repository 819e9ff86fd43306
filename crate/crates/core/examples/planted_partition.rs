//! Planted-partition generation and cut diagnostics.

use dynamite::planted::{cut_set, generate, zeta_estimate, PlantedParams, ZetaMode};

fn main() -> dynamite::Result<()> {
    let params = PlantedParams::new(64, 4, 0.5, 0.05, 3)?;
    let pg = generate(&params)?;
    println!(
        "n={} r={} edges={} max degree={}",
        params.n,
        params.r,
        pg.graph.num_edges(),
        pg.graph.max_degree()
    );
    println!("expected cut size {:.2}", params.expected_cut_size());
    for j in 0..params.r {
        println!("  community {j}: |B| = {}", cut_set(&pg, j)?.len());
    }

    let small = generate(&PlantedParams::new(8, 2, 0.7, 0.3, 5)?)?;
    let k = (small.graph.max_degree() + 2) as u16;
    let exact = zeta_estimate(&small, 0, k, ZetaMode::Exact, 0)?;
    let sampled = zeta_estimate(&small, 0, k, ZetaMode::Sampled(400), 1)?;
    println!(
        "zeta on n=8 with k={k}: exact {:.4}, sampled {:.4} +/- {:.4} (thinning {})",
        exact.value, sampled.value, sampled.radius, sampled.thinning
    );
    Ok(())
}
