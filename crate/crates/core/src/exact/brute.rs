use super::{CycleSearch, SolveError};
use crate::discrepancy::{Certificate, Method};
use crate::graph::OrientedGraph;

pub const BRUTE_FORCE_MAX_N: usize = 9;

/// Tries every ordering of `1..n` after the anchor 0, i.e. each undirected
/// Hamilton cycle in both traversal directions, and keeps the first sequence
/// with the most aligned edges. Used as an oracle for the other solvers.
pub fn brute_force_cycle(g: &OrientedGraph) -> Result<CycleSearch, SolveError> {
    let n = g.n();
    if n < 3 {
        return Err(SolveError::TooFewVertices(n));
    }
    if n > BRUTE_FORCE_MAX_N {
        return Err(SolveError::TooLarge {
            what: "brute-force",
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    let mut seq: Vec<usize> = (0..n).collect();
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut consider = |seq: &[usize]| {
        let mut aligned = 0;
        for i in 0..n {
            let (u, v) = (seq[i], seq[(i + 1) % n]);
            if g.has_edge(u, v) {
                aligned += 1;
            } else if !g.has_edge(v, u) {
                return;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| aligned > *b) {
            best = Some((aligned, seq.to_vec()));
        }
    };

    for_each_tail_permutation(&mut seq, 1, &mut consider);

    Ok(match best {
        Some((_, seq)) => CycleSearch::Found(
            Certificate::cycle(g, seq, Method::External, true).expect("checked adjacency on every step"),
        ),
        None => CycleSearch::NotHamiltonian,
    })
}

/// Heap's algorithm over `seq[fixed..]`, calling `f` once per ordering.
fn for_each_tail_permutation(seq: &mut [usize], fixed: usize, f: &mut impl FnMut(&[usize])) {
    let k = seq.len() - fixed;
    let mut counters = vec![0usize; k];
    f(seq);
    let mut i = 0;
    while i < k {
        if counters[i] < i {
            if i % 2 == 0 {
                seq.swap(fixed, fixed + i);
            } else {
                seq.swap(fixed + counters[i], fixed + i);
            }
            f(seq);
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}
