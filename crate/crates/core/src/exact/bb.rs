use std::time::Instant;

use super::{CycleSearch, SolveError, SolveOptions};
use crate::discrepancy::{Certificate, Method};
use crate::graph::OrientedGraph;

/// Vertex sets are single `u64` words.
pub const BB_MAX_N: usize = 64;

const TIME_CHECK_INTERVAL: u64 = 4096;

struct Search<'a> {
    n: usize,
    adj: Vec<u64>,
    out: Vec<u64>,
    inn: Vec<u64>,
    path: Vec<usize>,
    best_value: Option<usize>,
    best_path: Vec<usize>,
    nodes: u64,
    stopped: bool,
    opts: &'a SolveOptions,
    started: Instant,
}

impl Search<'_> {
    /// Admissible bound on the aligned edges still to come.
    ///
    /// Every remaining step enters a distinct vertex (an unvisited one, or 0
    /// when closing). The step into `w` can only be aligned if some vertex
    /// that may still precede `w` has an edge into it.
    fn remaining_bound(&self, unvisited: u64, last: usize) -> usize {
        let sources = unvisited | 1 << last;
        let mut bound = 0;
        let mut rest = unvisited;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.inn[w] & sources & !(1 << w) != 0 {
                bound += 1;
            }
        }
        if self.inn[0] & sources != 0 {
            bound += 1;
        }
        bound
    }

    /// Necessary conditions for completing the current path into a cycle.
    fn completable(&self, unvisited: u64, last: usize) -> bool {
        if unvisited == 0 {
            return self.adj[last] & 1 == 1;
        }
        if self.adj[last] & unvisited == 0 || self.adj[0] & (unvisited | 1 << last) == 0 {
            return false;
        }
        let ends = unvisited | 1 << last | 1;
        let mut rest = unvisited;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if (self.adj[w] & ends).count_ones() < 2 {
                return false;
            }
        }
        true
    }

    fn out_of_budget(&mut self) -> bool {
        if let Some(limit) = self.opts.node_limit {
            if self.nodes >= limit {
                self.stopped = true;
            }
        }
        if let Some(limit) = self.opts.time_limit {
            if self.nodes % TIME_CHECK_INTERVAL == 0 && self.started.elapsed() >= limit {
                self.stopped = true;
            }
        }
        self.stopped
    }

    fn dfs(&mut self, unvisited: u64, last: usize, value: usize) {
        if self.stopped || self.best_value == Some(self.n) {
            return;
        }
        if unvisited == 0 {
            if self.adj[last] & 1 == 1 {
                let total = value + usize::from(self.out[last] & 1 == 1);
                if self.best_value.is_none_or(|b| total > b) {
                    self.best_value = Some(total);
                    self.best_path = self.path.clone();
                }
            }
            return;
        }
        if self.out_of_budget() {
            return;
        }
        self.nodes += 1;
        if let Some(best) = self.best_value {
            if value + self.remaining_bound(unvisited, last) <= best {
                return;
            }
        }
        if !self.completable(unvisited, last) {
            return;
        }
        // aligned extensions first, then opposed ones, ascending within each
        let aligned = self.out[last] & unvisited;
        let opposed = self.adj[last] & unvisited & !aligned;
        for (candidates, gain) in [(aligned, 1), (opposed, 0)] {
            let mut rest = candidates;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                self.path.push(w);
                self.dfs(unvisited & !(1 << w), w, value + gain);
                self.path.pop();
                if self.stopped {
                    return;
                }
            }
        }
    }
}

pub(super) fn solve(g: &OrientedGraph, opts: &SolveOptions) -> Result<(CycleSearch, u64), SolveError> {
    let n = g.n();
    if n > BB_MAX_N {
        return Err(SolveError::TooLarge {
            what: "branch-and-bound",
            n,
            max: BB_MAX_N,
        });
    }
    let mut adj = vec![0u64; n];
    let mut out = vec![0u64; n];
    let mut inn = vec![0u64; n];
    for (u, v) in g.edges() {
        out[u] |= 1 << v;
        inn[v] |= 1 << u;
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut search = Search {
        n,
        adj,
        out,
        inn,
        path: vec![0],
        best_value: None,
        best_path: Vec::new(),
        nodes: 0,
        stopped: false,
        opts,
        started: Instant::now(),
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    search.dfs(all & !1, 0, 0);
    let result = match (search.best_value, search.stopped) {
        (Some(_), stopped) => {
            let cert = Certificate::cycle(g, search.best_path.clone(), Method::ExactBb, !stopped)
                .expect("search only emits valid cycles");
            CycleSearch::Found(cert)
        }
        (None, true) => CycleSearch::Undecided,
        (None, false) => CycleSearch::NotHamiltonian,
    };
    Ok((result, search.nodes))
}
