//! Subset DP, branch and bound and the permutation brute force on the same
//! random graphs.
//!
//! cargo run --release --example exact_solvers

use oridisc::exact::{brute_force_cycle, max_discrepancy_cycle, Algorithm, SolveOptions};
use oridisc::graph::random_oriented;

fn main() -> anyhow::Result<()> {
    println!("{:>4} {:>4} {:>6} {:>4} {:>4} {:>5} {:>10} {:>10}", "seed", "n", "sigma2", "dp", "bb", "brute", "dp states", "bb nodes");
    for seed in 0..12u64 {
        let n = 6 + (seed as usize % 4);
        let g = random_oriented(n, 0.7, seed)?;
        let dp = max_discrepancy_cycle(&g, &SolveOptions::with_algorithm(Algorithm::SubsetDp))?;
        let bb = max_discrepancy_cycle(&g, &SolveOptions::with_algorithm(Algorithm::BranchAndBound))?;
        let brute = brute_force_cycle(&g)?;
        let show = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        println!(
            "{:>4} {:>4} {:>6} {:>4} {:>4} {:>5} {:>10} {:>10}",
            seed,
            n,
            g.sigma2()?,
            show(dp.search.sigma_max()),
            show(bb.search.sigma_max()),
            show(brute.sigma_max()),
            dp.work,
            bb.work
        );
    }
    Ok(())
}
