use std::ops::Range;

use super::{GraphError, OrientedGraph};

/// Largest vertex count accepted by [`enumerate_oriented_graphs`] (3^21 labelled graphs).
pub const MAX_ENUMERATION_N: usize = 7;

/// All labelled oriented graphs on `n` vertices, indexed `0..3^(n(n-1)/2)`.
///
/// Index `k` is read as a base-3 number whose digit `i` (least significant
/// first) describes the `i`-th vertex pair in lexicographic order
/// `(0,1), (0,2), ..., (n-2,n-1)`: digit 0 leaves the pair empty, 1 adds
/// `u -> v`, 2 adds `v -> u`.
#[derive(Debug, Clone)]
pub struct GraphEnumeration {
    n: usize,
    pairs: Vec<(usize, usize)>,
    total: u64,
}

pub fn enumerate_oriented_graphs(n: usize) -> Result<GraphEnumeration, GraphError> {
    if n > MAX_ENUMERATION_N {
        return Err(GraphError::TooLarge {
            n,
            max: MAX_ENUMERATION_N,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let total = 3u64.pow(pairs.len() as u32);
    Ok(GraphEnumeration { n, pairs, total })
}

impl GraphEnumeration {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// The graph with the given enumeration index.
    pub fn graph_at(&self, index: u64) -> OrientedGraph {
        assert!(index < self.total, "index {index} out of range");
        let mut g = OrientedGraph::empty(self.n);
        let mut k = index;
        for &(u, v) in &self.pairs {
            match k % 3 {
                1 => g.insert_unchecked(u, v),
                2 => g.insert_unchecked(v, u),
                _ => {}
            }
            k /= 3;
        }
        g
    }

    pub fn iter(&self) -> impl Iterator<Item = OrientedGraph> + '_ {
        self.iter_range(0..self.total)
    }

    /// Graphs with indices in `range`, in index order.
    pub fn iter_range(&self, range: Range<u64>) -> impl Iterator<Item = OrientedGraph> + '_ {
        let end = range.end.min(self.total);
        (range.start..end).map(move |k| self.graph_at(k))
    }

    /// Splits `0..len()` into at most `parts` contiguous, nearly equal ranges.
    pub fn partition(&self, parts: usize) -> Vec<Range<u64>> {
        let parts = parts.max(1) as u64;
        let chunk = self.total.div_ceil(parts).max(1);
        (0..parts)
            .map(|i| (i * chunk).min(self.total)..((i + 1) * chunk).min(self.total))
            .filter(|r| !r.is_empty())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    #[test]
    fn small_counts_and_order() {
        let e = enumerate_oriented_graphs(2).unwrap();
        let all: Vec<_> = e.iter().map(|g| g.edges().collect::<Vec<_>>()).collect();
        assert_eq!(all, vec![vec![], vec![(0, 1)], vec![(1, 0)]]);
        assert_eq!(enumerate_oriented_graphs(3).unwrap().len(), 27);
        assert_eq!(enumerate_oriented_graphs(5).unwrap().len(), 59_049);
        assert_eq!(enumerate_oriented_graphs(0).unwrap().len(), 1);
        assert!(matches!(enumerate_oriented_graphs(8), Err(GraphError::TooLarge { n: 8, .. })));
    }

    #[test]
    fn exhaustive_distinctness() {
        for n in 0..=5 {
            let e = enumerate_oriented_graphs(n).unwrap();
            let seen: HashSet<OrientedGraph> = e.iter().collect();
            assert_eq!(seen.len() as u64, 3u64.pow((n * n.saturating_sub(1) / 2) as u32));
        }
    }

    #[test]
    fn partition_covers_range() {
        let e = enumerate_oriented_graphs(4).unwrap();
        for k in [1, 3, 7, 1000] {
            let parts = e.partition(k);
            assert_eq!(parts.first().unwrap().start, 0);
            assert_eq!(parts.last().unwrap().end, e.len());
            for w in parts.windows(2) {
                assert_eq!(w[0].end, w[1].start);
            }
        }
    }
}
