//! Benchmark table: exact solvers against each other on the extremal family,
//! then the heuristic and the pipeline on larger random graphs. Prints CSV.
//!
//! cargo run --release --example bench

use oridisc::harness::bench::{run_bench, to_csv, BenchAlgorithm, BenchSpec, Family};

fn main() {
    let exact = BenchSpec {
        sizes: vec![10, 12, 14, 16],
        algorithms: vec![BenchAlgorithm::Dp, BenchAlgorithm::Bb],
        ..BenchSpec::default()
    };
    print!("{}", to_csv(&run_bench(&exact)));

    let large = BenchSpec {
        family: Family::RandomP { p: 0.8 },
        sizes: vec![60, 120],
        instances: 2,
        algorithms: vec![BenchAlgorithm::Heuristic, BenchAlgorithm::Pipeline],
        parallel: 4,
        ..BenchSpec::default()
    };
    print!("{}", to_csv(&run_bench(&large)));
}
