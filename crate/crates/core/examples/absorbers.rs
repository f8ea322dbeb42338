//! Absorber counts, vertex classification, the reservoir and an absorbing
//! path that swallows a few leftover vertices.
//!
//! cargo run --release --example absorbers

use oridisc::absorbers::{
    absorb_leftovers, build_absorbing_path, build_reservoir, classify_all, strong_absorbers, weak_absorbers,
    AbsorberConfig, WeakCountMode,
};
use oridisc::extremal_graph;

fn main() -> anyhow::Result<()> {
    let (params, g) = extremal_graph(120, 150)?;
    let config = AbsorberConfig::default();
    println!("{params}");
    println!(
        "pair (0, 1): {} strong, {} weak (factorised)",
        strong_absorbers(&g, 0, 1)?,
        weak_absorbers(&g, 0, 1, config.alpha1, WeakCountMode::Factorized)?.count
    );

    let report = classify_all(&g, &config)?;
    println!(
        "classification: {} strong, {} weak, {} neither; degree condition met: {}",
        report.strong, report.weak, report.neither, report.meets_degree_condition
    );

    let abs = build_absorbing_path(&g, &config, 7)?;
    println!(
        "absorbing path: {} vertices of budget {}, {} gadgets ({} strong)",
        abs.path.len(),
        abs.budget,
        abs.gadgets.len(),
        abs.strong_gadgets()
    );
    for w in &abs.warnings {
        println!("  warning: {w}");
    }

    let reservoir = build_reservoir(&g, &abs.vertex_set(), &config, 7)?;
    println!(
        "reservoir: {:?} (cap {}), {} of {} non-adjacent pairs without a connector in it",
        reservoir.vertices, reservoir.cap, reservoir.pairs_uncovered, reservoir.pairs_audited
    );

    let on_path = abs.vertex_set();
    let leftovers: Vec<usize> = (0..g.n()).filter(|&v| !on_path.contains(v)).take(3).collect();
    let absorbed = absorb_leftovers(&g, &abs, &leftovers)?;
    println!(
        "absorbed {leftovers:?}: path {} -> {} vertices, same endpoints: {}, {} strong / {} weak gadgets used",
        abs.path.len(),
        absorbed.path.len(),
        absorbed.path.endpoints() == abs.path.endpoints(),
        absorbed.strong_used,
        absorbed.weak_used
    );
    Ok(())
}
