use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{CycleSearch, SolveError, SubsetDp};
use crate::discrepancy::{Certificate, Method};
use crate::graph::OrientedGraph;

pub const FACTOR_MAX_N: usize = 12;

/// Vertex-disjoint cycles of prescribed sizes covering every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleFactor {
    pub cycles: Vec<Certificate>,
    /// Sum of `sigma_max` over the cycles.
    pub total_sigma_max: usize,
}

struct FactorSearch<'a> {
    g: &'a OrientedGraph,
    dp: SubsetDp,
    // best cycle on each vertex subset (bitmask), if any
    memo: HashMap<u32, Option<(usize, Vec<usize>)>>,
    best: Option<(usize, Vec<Vec<usize>>)>,
}

impl FactorSearch<'_> {
    fn best_cycle(&mut self, mask: u32) -> Option<(usize, Vec<usize>)> {
        if let Some(hit) = self.memo.get(&mask) {
            return hit.clone();
        }
        let vertices: Vec<usize> = (0..self.g.n()).filter(|v| mask >> v & 1 == 1).collect();
        let sub = self.g.induced(&vertices);
        let result = match self.dp.solve(&sub) {
            CycleSearch::Found(c) => Some((c.sigma_max, c.cycle.iter().map(|&i| vertices[i]).collect())),
            _ => None,
        };
        self.memo.insert(mask, result.clone());
        result
    }

    /// `sizes` holds the multiset of part sizes still to place. The part
    /// containing the smallest uncovered vertex takes each distinct remaining
    /// size in turn, so every unordered partition is generated once.
    fn search(&mut self, uncovered: u32, sizes: &mut Vec<usize>, value: usize, chosen: &mut Vec<Vec<usize>>) {
        if uncovered == 0 {
            if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
                self.best = Some((value, chosen.clone()));
            }
            return;
        }
        let anchor = uncovered.trailing_zeros();
        let others: Vec<u32> = (0..32).filter(|&v| v != anchor && uncovered >> v & 1 == 1).collect();
        let mut distinct = sizes.clone();
        distinct.sort_unstable();
        distinct.dedup();
        for size in distinct {
            let pos = sizes.iter().position(|&s| s == size).unwrap();
            sizes.swap_remove(pos);
            for_each_combination(&others, size - 1, &mut |combo| {
                let mask = combo.iter().fold(1u32 << anchor, |m, &v| m | 1 << v);
                if let Some((cycle_value, cycle)) = self.best_cycle(mask) {
                    chosen.push(cycle);
                    self.search(uncovered & !mask, sizes, value + cycle_value, chosen);
                    chosen.pop();
                }
            });
            sizes.push(size);
        }
    }
}

fn for_each_combination(items: &[u32], k: usize, f: &mut impl FnMut(&[u32])) {
    fn rec(items: &[u32], k: usize, start: usize, current: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if current.len() == k {
            f(current);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - current.len() {
                break;
            }
            current.push(items[i]);
            rec(items, k, i + 1, current, f);
            current.pop();
        }
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f);
}

/// Maximises the total `sigma_max` over cycle factors whose cycle lengths
/// are `part_sizes`. Returns `Ok(None)` when no such factor exists.
pub fn cycle_factor_discrepancy(g: &OrientedGraph, part_sizes: &[usize]) -> Result<Option<CycleFactor>, SolveError> {
    let n = g.n();
    if n > FACTOR_MAX_N {
        return Err(SolveError::TooLarge {
            what: "cycle-factor",
            n,
            max: FACTOR_MAX_N,
        });
    }
    if part_sizes.iter().any(|&s| s < 3) {
        return Err(SolveError::Domain("every cycle in a factor needs at least 3 vertices".into()));
    }
    if part_sizes.iter().sum::<usize>() != n {
        return Err(SolveError::Domain(format!(
            "part sizes sum to {}, expected n = {n}",
            part_sizes.iter().sum::<usize>()
        )));
    }
    let mut search = FactorSearch {
        g,
        dp: SubsetDp::new(3)?,
        memo: HashMap::new(),
        best: None,
    };
    let all = if n == 0 { 0 } else { (1u32 << n) - 1 };
    search.search(all, &mut part_sizes.to_vec(), 0, &mut Vec::new());
    Ok(search.best.map(|(total, cycles)| CycleFactor {
        cycles: cycles
            .into_iter()
            .map(|c| Certificate::cycle(g, c, Method::ExactDp, true).expect("cycles come from induced subgraphs"))
            .collect(),
        total_sigma_max: total,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::{validate_certificate, Spanning};
    use crate::exact::brute_force_cycle;
    use crate::graph::random_tournament;

    #[test]
    fn examples() {
        assert_eq!(cycle_factor_discrepancy(&OrientedGraph::directed_cycle(6), &[3, 3]).unwrap(), None);
        let f = cycle_factor_discrepancy(&OrientedGraph::directed_cycle(3), &[3]).unwrap().unwrap();
        assert_eq!(f.total_sigma_max, 3);
        assert!(cycle_factor_discrepancy(&OrientedGraph::directed_cycle(6), &[2, 4]).is_err());
        assert!(cycle_factor_discrepancy(&OrientedGraph::directed_cycle(6), &[3, 4]).is_err());
    }

    fn oracle_3_3(g: &OrientedGraph) -> Option<usize> {
        let best_on = |vs: &[usize]| brute_force_cycle(&g.induced(vs)).unwrap().sigma_max();
        let mut best = None;
        for a in 1..6 {
            for b in a + 1..6 {
                let left = [0, a, b];
                let right: Vec<usize> = (0..6).filter(|v| !left.contains(v)).collect();
                if let (Some(x), Some(y)) = (best_on(&left), best_on(&right)) {
                    best = best.max(Some(x + y));
                }
            }
        }
        best
    }

    #[test]
    fn matches_bipartition_oracle_on_tournaments() {
        for seed in 0..40 {
            let g = random_tournament(6, seed);
            let got = cycle_factor_discrepancy(&g, &[3, 3]).unwrap();
            assert_eq!(got.as_ref().map(|f| f.total_sigma_max), oracle_3_3(&g), "seed {seed}");
            if let Some(f) = got {
                let mut covered: Vec<usize> = f.cycles.iter().flat_map(|c| c.cycle.clone()).collect();
                covered.sort_unstable();
                assert_eq!(covered, (0..6).collect::<Vec<_>>());
                for c in &f.cycles {
                    assert!(validate_certificate(&g, c, Spanning::NotRequired).valid);
                }
            }
        }
    }

    #[test]
    fn mixed_sizes() {
        let g = random_tournament(10, 4);
        let f = cycle_factor_discrepancy(&g, &[4, 3, 3]).unwrap().unwrap();
        let mut sizes: Vec<usize> = f.cycles.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![3, 3, 4]);
        assert_eq!(f.total_sigma_max, f.cycles.iter().map(|c| c.sigma_max).sum::<usize>());
    }
}
