//! First-improvement local search over Hamilton cycles of `U(G)`.
//!
//! Two move families keep the sequence a Hamilton cycle of the underlying
//! graph: segment reversal (2-opt) and single-vertex relocation (or-opt).
//! Candidate moves are generated from the underlying neighbourhood of a
//! vertex so that at least one new edge is known to exist. The value of a
//! reversal is evaluated in O(1) from prefix sums of the aligned indicator.

use rand::seq::SliceRandom;

use crate::bitset::VertexSet;
use crate::discrepancy::aligned;
use crate::graph::OrientedGraph;
use crate::rng::Rng;

#[derive(Debug, Clone, Copy)]
enum Move {
    /// Reverse `seq[a+1..=b]`.
    Reverse { a: usize, b: usize },
    /// Move the vertex at `from` to sit right after the vertex now at `after`.
    Relocate { from: usize, after: usize },
}

pub(crate) struct Tour<'a> {
    g: &'a OrientedGraph,
    nbrs: &'a [VertexSet],
    seq: Vec<usize>,
    pos: Vec<usize>,
    al: Vec<i64>,
    pre: Vec<i64>,
    plus: i64,
}

impl<'a> Tour<'a> {
    pub(crate) fn new(g: &'a OrientedGraph, nbrs: &'a [VertexSet], seq: Vec<usize>) -> Self {
        let n = seq.len();
        let mut tour = Self {
            g,
            nbrs,
            seq,
            pos: vec![0; g.n()],
            al: vec![0; n],
            pre: vec![0; n + 1],
            plus: 0,
        };
        tour.rebuild();
        tour
    }

    /// Recomputes the derived arrays and orients the cycle so that the
    /// aligned count is the larger one.
    fn rebuild(&mut self) {
        let n = self.seq.len();
        for flip in [false, true] {
            if flip {
                self.seq.reverse();
            }
            for k in 0..n {
                self.al[k] = aligned(self.g, self.seq[k], self.seq[(k + 1) % n]) as i64;
                self.pre[k + 1] = self.pre[k] + self.al[k];
            }
            self.plus = self.pre[n];
            if 2 * self.plus >= n as i64 {
                break;
            }
        }
        for (k, &v) in self.seq.iter().enumerate() {
            self.pos[v] = k;
        }
    }

    pub(crate) fn sigma_max(&self) -> usize {
        self.plus as usize
    }

    pub(crate) fn into_sequence(self) -> Vec<usize> {
        self.seq
    }

    fn al_pair(&self, u: usize, v: usize) -> i64 {
        aligned(self.g, u, v) as i64
    }

    fn best_of(&self, new_plus: i64) -> i64 {
        new_plus.max(self.seq.len() as i64 - new_plus)
    }

    /// Value after removing edges `e1`, `e2` and reconnecting by reversal.
    fn reverse_value(&self, e1: usize, e2: usize) -> Option<(i64, Move)> {
        let n = self.seq.len();
        let (a, b) = (e1.min(e2), e1.max(e2));
        if b - a < 2 || (a == 0 && b == n - 1) {
            return None;
        }
        let (sa, sa1, sb, sb1) = (self.seq[a], self.seq[a + 1], self.seq[b], self.seq[(b + 1) % n]);
        if !self.g.adjacent(sa, sb) || !self.g.adjacent(sa1, sb1) {
            return None;
        }
        let inner = (b - a - 1) as i64;
        let inner_aligned = self.pre[b] - self.pre[a + 1];
        let new_plus = self.plus - self.al[a] - self.al[b] - inner_aligned
            + (inner - inner_aligned)
            + self.al_pair(sa, sb)
            + self.al_pair(sa1, sb1);
        Some((self.best_of(new_plus), Move::Reverse { a, b }))
    }

    fn relocate_value(&self, from: usize, after: usize) -> Option<(i64, Move)> {
        let n = self.seq.len();
        let before = (from + n - 1) % n;
        if n < 4 || after == from || after == before {
            return None;
        }
        let (p, v, q) = (self.seq[before], self.seq[from], self.seq[(from + 1) % n]);
        let (x, y) = (self.seq[after], self.seq[(after + 1) % n]);
        if !self.g.adjacent(p, q) || !self.g.adjacent(x, v) || !self.g.adjacent(v, y) {
            return None;
        }
        let new_plus = self.plus - self.al[before] - self.al[from] + self.al_pair(p, q) - self.al[after]
            + self.al_pair(x, v)
            + self.al_pair(v, y);
        Some((self.best_of(new_plus), Move::Relocate { from, after }))
    }

    fn improving_move(&self, v: usize) -> Option<Move> {
        let n = self.seq.len();
        let i = self.pos[v];
        let better = |c: Option<(i64, Move)>| c.filter(|(value, _)| *value > self.plus).map(|(_, m)| m);
        for w in self.nbrs[v].iter() {
            let j = self.pos[w];
            let found = better(self.reverse_value(i, j))
                .or_else(|| better(self.reverse_value((i + n - 1) % n, (j + n - 1) % n)))
                .or_else(|| better(self.relocate_value(i, j)))
                .or_else(|| better(self.relocate_value(i, (j + n - 1) % n)));
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn apply(&mut self, m: Move) {
        match m {
            Move::Reverse { a, b } => self.seq[a + 1..=b].reverse(),
            Move::Relocate { from, after } => {
                let anchor = self.seq[after];
                let v = self.seq.remove(from);
                let at = self.seq.iter().position(|&x| x == anchor).unwrap();
                self.seq.insert(at + 1, v);
            }
        }
        self.rebuild();
    }

    /// Runs until a local optimum, a perfect cycle, or `max_moves` applied
    /// moves. Returns the number of moves applied.
    pub(crate) fn descend(&mut self, max_moves: u64, rng: &mut Rng) -> u64 {
        let n = self.seq.len();
        let mut order: Vec<usize> = self.seq.clone();
        order.sort_unstable();
        let mut moves = 0;
        loop {
            order.shuffle(rng);
            let mut improved = false;
            for &v in &order {
                if moves >= max_moves || self.plus as usize == n {
                    return moves;
                }
                if let Some(m) = self.improving_move(v) {
                    self.apply(m);
                    moves += 1;
                    improved = true;
                }
            }
            if !improved {
                return moves;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::sigma_counts;
    use crate::graph::random_tournament;
    use crate::rng::rng_from_seed;

    #[test]
    fn move_values_match_recomputation() {
        for seed in 0..30 {
            let g = random_tournament(11, seed);
            let nbrs = g.underlying();
            let tour = Tour::new(&g, &nbrs, (0..11).collect());
            for e1 in 0..11 {
                for e2 in 0..11 {
                    for candidate in [tour.reverse_value(e1, e2), tour.relocate_value(e1, e2)] {
                        let Some((value, m)) = candidate else { continue };
                        let mut copy = Tour::new(&g, &nbrs, tour.seq.clone());
                        copy.apply(m);
                        let (p, q) = sigma_counts(&g, &copy.seq, true).unwrap();
                        assert_eq!(value as usize, p.max(q), "{m:?}");
                        assert_eq!(copy.sigma_max(), p.max(q));
                    }
                }
            }
        }
    }

    #[test]
    fn descent_never_decreases() {
        let g = random_tournament(30, 9);
        let nbrs = g.underlying();
        let mut tour = Tour::new(&g, &nbrs, (0..30).collect());
        let before = tour.sigma_max();
        tour.descend(u64::MAX, &mut rng_from_seed(1));
        assert!(tour.sigma_max() >= before);
        let (p, q) = sigma_counts(&g, &tour.seq, true).unwrap();
        assert_eq!(p.max(q), tour.sigma_max());
    }
}
