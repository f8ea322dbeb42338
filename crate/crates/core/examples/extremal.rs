//! Builds the extremal family for one `n` and checks that the best Hamilton
//! cycle of each member has exactly `floor(h/2)` edges in its dominant
//! direction.
//!
//! cargo run --release --example extremal -- 12

use oridisc::exact::{max_discrepancy_cycle, SolveOptions};
use oridisc::{extremal_graph, feasible_h_values, serialize_graph};

fn main() -> anyhow::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(Ok(12), |s| s.parse())?;
    println!("{:>4} {:>3} {:>3} {:>4} {:>7} {:>8}", "h", "r", "t", "ell", "sigma2", "optimum");
    for h in feasible_h_values(n) {
        let (params, g) = extremal_graph(n, h)?;
        let best = max_discrepancy_cycle(&g, &SolveOptions::default())?.search.sigma_max();
        println!(
            "{:>4} {:>3} {:>3} {:>4} {:>7} {:>8}",
            h,
            params.r,
            params.t,
            params.ell,
            g.sigma2()?,
            best.map_or("-".into(), |v| v.to_string())
        );
    }
    let (_, g) = extremal_graph(6, 6)?;
    println!("\nsmallest member, in the graph text format:\n{}", serialize_graph(&g));
    Ok(())
}
