//! Certificates: direction counts, reversal, canonical form and validation
//! of a tampered copy.
//!
//! cargo run --example certificates

use oridisc::discrepancy::Method;
use oridisc::{validate_certificate, Certificate, OrientedGraph, Spanning};

fn main() -> anyhow::Result<()> {
    // 0 -> 1 -> 2 -> 3 -> 4 -> 0 with the pair 2, 3 flipped, plus a chord
    let g = OrientedGraph::from_edges(5, [(0, 1), (1, 2), (3, 2), (3, 4), (4, 0), (0, 2)])?;
    let cert = Certificate::cycle(&g, vec![2, 3, 4, 0, 1], Method::External, false)?;
    println!("stored   : {:?} +{} -{} max {}", cert.cycle, cert.sigma_plus, cert.sigma_minus, cert.sigma_max);
    let rev = cert.reversed();
    println!("reversed : {:?} +{} -{}", rev.cycle, rev.sigma_plus, rev.sigma_minus);
    println!("canonical: {:?}", cert.canonical().cycle);
    println!("json     : {}", serde_json::to_string(&cert)?);

    let mut forged = cert.clone();
    forged.sigma_plus += 1;
    let check = validate_certificate(&g, &forged, Spanning::Required);
    println!("forged copy valid: {}", check.valid);
    for v in &check.violations {
        println!("  {v}");
    }
    Ok(())
}
