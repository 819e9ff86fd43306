//! Small method comparison written as CSV to stdout.

use dynamite::bench::{compare, write_csv, BenchConfig, BenchProblem, Method};

fn main() -> dynamite::Result<()> {
    let config = BenchConfig {
        problems: vec![
            BenchProblem::Cycle { n: 16, half_width: 1 },
            BenchProblem::Cycle { n: 16, half_width: 8 },
        ],
        methods: Method::COMPARED.to_vec(),
        batches: 3,
        replicates: 2,
        epsilon: 0.05,
        delta: 0.1,
        count_epsilon: 0.25,
        count_delta: 0.25,
        seed: 1,
    };
    let rows = compare(&config)?;
    write_csv(&rows, std::io::stdout().lock())
}
