use super::{CycleSearch, SolveError};
use crate::discrepancy::{Certificate, Method};
use crate::graph::OrientedGraph;

/// State-space guard: `2^(n-1) * (n-1)` one-byte states.
pub const DP_MAX_N: usize = 24;

const UNREACHED: i8 = -1;

/// Subset dynamic programme anchored at vertex 0.
///
/// `best[S][v]` is the largest number of aligned edges on a path that starts
/// at 0, visits exactly `{0} ∪ S` and ends at `v ∈ S`. The cycle value closes
/// with the underlying edge `v - 0`, adding one if it is directed `v -> 0`.
/// The table buffer is kept between calls so a worker can reuse it across
/// many small graphs.
pub struct SubsetDp {
    best: Vec<i8>,
    states: u64,
}

struct Masks {
    /// `adj[v]`: underlying neighbours of `v` among `1..n`, as bits `v-1`.
    adj: Vec<u32>,
    /// `out[v]`: out-neighbours of `v` among `1..n`.
    out: Vec<u32>,
}

impl Masks {
    fn new(g: &OrientedGraph) -> Self {
        let n = g.n();
        let mut adj = vec![0u32; n];
        let mut out = vec![0u32; n];
        for u in 0..n {
            for v in 1..n {
                if g.has_edge(u, v) {
                    out[u] |= 1 << (v - 1);
                    adj[u] |= 1 << (v - 1);
                } else if g.has_edge(v, u) {
                    adj[u] |= 1 << (v - 1);
                }
            }
        }
        Self { adj, out }
    }
}

impl SubsetDp {
    pub fn new(n: usize) -> Result<Self, SolveError> {
        if n < 3 {
            return Err(SolveError::TooFewVertices(n));
        }
        if n > DP_MAX_N {
            return Err(SolveError::TooLargeForDp { n, max: DP_MAX_N });
        }
        Ok(Self {
            best: Vec::new(),
            states: 0,
        })
    }

    pub fn states_relaxed(&self) -> u64 {
        self.states
    }

    fn fill(&mut self, g: &OrientedGraph, masks: &Masks) {
        let m = g.n() - 1;
        let size = (1usize << m) * m;
        self.best.clear();
        self.best.resize(size, UNREACHED);
        for v in 1..=m {
            if masks.adj[0] >> (v - 1) & 1 == 1 {
                self.best[(1usize << (v - 1)) * m + (v - 1)] = (masks.out[0] >> (v - 1) & 1) as i8;
            }
        }
        for mask in 1usize..(1 << m) {
            let base = mask * m;
            let mut lasts = mask;
            while lasts != 0 {
                let li = lasts.trailing_zeros() as usize;
                lasts &= lasts - 1;
                let value = self.best[base + li];
                if value < 0 {
                    continue;
                }
                let last = li + 1;
                let mut nexts = masks.adj[last] as usize & !mask;
                while nexts != 0 {
                    let ni = nexts.trailing_zeros() as usize;
                    nexts &= nexts - 1;
                    self.states += 1;
                    let gain = (masks.out[last] >> ni & 1) as i8;
                    let slot = &mut self.best[(mask | 1 << ni) * m + ni];
                    if value + gain > *slot {
                        *slot = value + gain;
                    }
                }
            }
        }
    }

    /// Best closing vertex and cycle value; the smallest vertex wins ties.
    fn close(&self, g: &OrientedGraph, masks: &Masks) -> Option<(usize, usize)> {
        let m = g.n() - 1;
        let full = (1usize << m) - 1;
        let mut best: Option<(usize, usize)> = None;
        for last in 1..=m {
            let value = self.best[full * m + last - 1];
            if value < 0 || masks.adj[0] >> (last - 1) & 1 == 0 {
                continue;
            }
            let total = value as usize + usize::from(g.has_edge(last, 0));
            if best.is_none_or(|(_, b)| total > b) {
                best = Some((last, total));
            }
        }
        best
    }

    /// Optimal value only, without reconstruction.
    pub fn value(&mut self, g: &OrientedGraph) -> Option<usize> {
        let masks = Masks::new(g);
        self.fill(g, &masks);
        self.close(g, &masks).map(|(_, v)| v)
    }

    pub fn solve(&mut self, g: &OrientedGraph) -> CycleSearch {
        let masks = Masks::new(g);
        self.fill(g, &masks);
        let Some((mut last, value)) = self.close(g, &masks) else {
            return CycleSearch::NotHamiltonian;
        };
        let m = g.n() - 1;
        let mut mask = (1usize << m) - 1;
        let mut reversed_path = vec![last];
        // Walk back choosing the smallest predecessor consistent with the table.
        while mask.count_ones() > 1 {
            let here = self.best[mask * m + last - 1];
            let prev_mask = mask & !(1 << (last - 1));
            let pred = (1..=m)
                .find(|&p| {
                    prev_mask >> (p - 1) & 1 == 1
                        && masks.adj[p] >> (last - 1) & 1 == 1
                        && self.best[prev_mask * m + p - 1] >= 0
                        && self.best[prev_mask * m + p - 1] + (masks.out[p] >> (last - 1) & 1) as i8 == here
                })
                .expect("every reached state has a recorded predecessor");
            reversed_path.push(pred);
            mask = prev_mask;
            last = pred;
        }
        reversed_path.push(0);
        reversed_path.reverse();
        let cert = Certificate::cycle(g, reversed_path, Method::ExactDp, true).expect("reconstructed cycle is valid");
        debug_assert_eq!(cert.sigma_max, value);
        CycleSearch::Found(cert)
    }
}
