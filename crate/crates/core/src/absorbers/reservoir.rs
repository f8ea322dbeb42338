use serde::{Deserialize, Serialize};

use super::{connectors, select_disjoint_tuples_capped, AbsorberConfig, AbsorberError, TupleFamilies};
use crate::bitset::VertexSet;
use crate::graph::OrientedGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairTally {
    pub u: usize,
    pub v: usize,
    /// Connectors of the pair outside the excluded set.
    pub available: usize,
    /// Of those, how many lie in the reservoir.
    pub in_reservoir: usize,
}

/// A small vertex set holding connectors for non-adjacent pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reservoir {
    pub vertices: Vec<usize>,
    pub cap: usize,
    pub pairs_audited: usize,
    /// Audited pairs with no connector in the reservoir.
    pub pairs_uncovered: usize,
    pub tallies: Vec<PairTally>,
}

impl Reservoir {
    pub fn set(&self, n: usize) -> VertexSet {
        VertexSet::from_iter_with_capacity(n, self.vertices.iter().copied())
    }
}

/// Picks at most `floor(tau n / 64)` vertices outside `excluded`, favouring
/// vertices that connect many non-adjacent pairs not yet served.
pub fn build_reservoir(
    g: &OrientedGraph,
    excluded: &VertexSet,
    config: &AbsorberConfig,
    seed: u64,
) -> Result<Reservoir, AbsorberError> {
    config.validate()?;
    let n = g.n();
    let mut families = TupleFamilies::new();
    for u in 0..n {
        for v in u + 1..n {
            if g.adjacent(u, v) {
                continue;
            }
            let mut c = connectors(g, u, v, config.connectors);
            c.difference_with(excluded);
            if c.is_empty() {
                return Err(AbsorberError::ReservoirFailure { u, v });
            }
            families.insert((u, v), c.iter().map(|w| vec![w]).collect());
        }
    }
    let cap = config.reservoir_cap(n);
    let selection = select_disjoint_tuples_capped(&families, 1, cap, seed)?;
    let mut vertices: Vec<usize> = selection.tuples.iter().map(|t| t[0]).collect();
    vertices.sort_unstable();
    let tallies: Vec<PairTally> = families
        .iter()
        .zip(&selection.pairs)
        .map(|((&(u, v), list), hits)| PairTally {
            u,
            v,
            available: list.len(),
            in_reservoir: hits.hits,
        })
        .collect();
    Ok(Reservoir {
        cap,
        pairs_audited: tallies.len(),
        pairs_uncovered: tallies.iter().filter(|t| t.in_reservoir == 0).count(),
        tallies,
        vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::extremal_graph;
    use crate::graph::random_tournament;

    #[test]
    fn tournament_has_nothing_to_serve() {
        let g = random_tournament(70, 2);
        let r = build_reservoir(&g, &VertexSet::new(70), &AbsorberConfig::default(), 0).unwrap();
        assert_eq!(r.pairs_audited, 0);
        assert!(r.vertices.len() <= r.cap);
    }

    #[test]
    fn excluding_everything_fails() {
        let (_, g) = extremal_graph(20, 24).unwrap();
        let all = VertexSet::full(20);
        assert!(matches!(
            build_reservoir(&g, &all, &AbsorberConfig::default(), 0),
            Err(AbsorberError::ReservoirFailure { .. })
        ));
    }

    #[test]
    fn extremal_200_240_is_served() {
        let (_, g) = extremal_graph(200, 240).unwrap();
        let r = build_reservoir(&g, &VertexSet::new(200), &AbsorberConfig::default(), 7).unwrap();
        assert_eq!(r.cap, 2);
        assert!(r.pairs_audited > 0);
        assert_eq!(r.pairs_uncovered, 0);
        assert!(r.vertices.len() <= r.cap);
    }
}
