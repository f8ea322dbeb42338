//! Rotation-extension construction followed by 2-opt / or-opt local search,
//! compared with the exact optimum where the DP can still run.
//!
//! cargo run --release --example heuristic

use oridisc::exact::{max_discrepancy_cycle, SolveOptions, DP_MAX_N};
use oridisc::graph::sample_with_sigma2;
use oridisc::heuristic::{heuristic_max_discrepancy, ore_hamilton, LocalSearchBudget};

fn main() -> anyhow::Result<()> {
    println!("{:>4} {:>6} {:>6} {:>9} {:>7} {:>7}", "n", "sigma2", "start", "heuristic", "optimum", "moves");
    for (i, n) in [12usize, 16, 20, 60, 150].into_iter().enumerate() {
        let g = match sample_with_sigma2(n, 0.65, n, i as u64, 1000)? {
            Ok(s) => s.graph,
            Err(f) => {
                println!("{n:>4} no sample reached the threshold ({f:?})");
                continue;
            }
        };
        let start = ore_hamilton(&g).map_err(|f| anyhow::anyhow!("{f:?}"))?;
        let budget = LocalSearchBudget {
            seed: i as u64,
            ..LocalSearchBudget::default()
        };
        let out = heuristic_max_discrepancy(&g, &budget)?;
        let optimum = if n <= DP_MAX_N.min(20) {
            max_discrepancy_cycle(&g, &SolveOptions::default())?
                .search
                .sigma_max()
                .map_or("-".into(), |v| v.to_string())
        } else {
            "n/a".to_string()
        };
        println!(
            "{:>4} {:>6} {:>6} {:>9} {:>7} {:>7}",
            n,
            g.sigma2()?,
            start.sigma_max,
            out.certificate.sigma_max,
            optimum,
            out.moves
        );
    }
    Ok(())
}
