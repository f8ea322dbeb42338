//! Exhaustive check over every labelled oriented graph on `n` vertices: each
//! one with `sigma2 >= n` has a Hamilton cycle with at least
//! `ceil(sigma2 / 2)` aligned edges.
//!
//! cargo run --release --example verify_small -- 5 4

use oridisc::exact::{verify_small, Claim, Condition, VerifyOptions};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(5), |s| s.parse())?;
    let parallel: usize = args.next().map_or(Ok(1), |s| s.parse())?;
    let opts = VerifyOptions {
        parallel,
        allow_large: true,
    };
    for claim in [Claim::Hamiltonian, Claim::HalfN, Claim::HalfSigma2] {
        let report = verify_small(n, Condition::Sigma2AtLeastN, claim, &opts)?;
        println!(
            "n={n} {claim:<12} scanned {:>6}, condition met {:>6}, counterexamples {}, {} ms",
            report.graphs_scanned,
            report.graphs_meeting_condition,
            report.counterexamples.len(),
            report.wall_time_ms
        );
    }
    Ok(())
}
