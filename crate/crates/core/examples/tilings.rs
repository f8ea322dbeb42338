//! Tiling plans over a range of `sigma2`, and an actual tiling of an
//! extremal graph with one directed path per tile.
//!
//! cargo run --release --example tilings

use oridisc::extremal_graph;
use oridisc::tilings::{find_tiling, tile_path, tiling_plan, TilingSearch, DEFAULT_NODE_LIMIT};

fn main() -> anyhow::Result<()> {
    let n = 24;
    for sigma2 in (n..=2 * (n - 1)).step_by(4) {
        match tiling_plan(n, sigma2) {
            Ok(plan) => println!("sigma2 = {sigma2:>2}: {plan}"),
            Err(e) => println!("sigma2 = {sigma2:>2}: {e}"),
        }
    }

    let (params, g) = extremal_graph(15, 20)?;
    let plan = tiling_plan(g.n(), g.sigma2()?)?;
    println!("\n{params}, plan {plan}");
    match find_tiling(&g, &plan, DEFAULT_NODE_LIMIT)? {
        TilingSearch::Found(cert) => {
            cert.validate(&g, &plan)?;
            for tile in &cert.tiles {
                let path = tile_path(&g, tile)?;
                println!("tile {tile:?} -> path {:?} ({} aligned)", path.cycle, path.sigma_plus);
            }
        }
        TilingSearch::NotFound { nodes, exhausted } => println!("no tiling ({nodes} nodes, exhausted {exhausted})"),
    }
    Ok(())
}
