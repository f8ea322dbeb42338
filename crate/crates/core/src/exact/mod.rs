//! Exact maximisation of `sigma_max` over Hamilton cycles.
//!
//! Every Hamilton cycle is enumerated as a sequence starting at vertex 0; a
//! cycle and its reversal are both visited, so maximising the number of
//! aligned edges over sequences is the same as maximising `sigma_max`.
//!
//! Two solvers share this objective: a subset dynamic programme over
//! `(visited set, last vertex)` states and a depth-first branch and bound.
//! A permutation brute force serves as an independent oracle for small `n`.

mod bb;
mod brute;
mod dp;
mod factor;
mod verify;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bb::BB_MAX_N;
pub use brute::{brute_force_cycle, BRUTE_FORCE_MAX_N};
pub use dp::{SubsetDp, DP_MAX_N};
pub use factor::{cycle_factor_discrepancy, CycleFactor, FACTOR_MAX_N};
pub use verify::{verify_small, Claim, Condition, Counterexample, VerificationReport, VerifyOptions, VERIFY_MAX_N};

use crate::discrepancy::Certificate;
use crate::graph::OrientedGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("Hamilton cycles need at least 3 vertices, got n = {0}")]
    TooFewVertices(usize),
    #[error("n = {n} exceeds the subset-dp limit of {max}; use branch-and-bound")]
    TooLargeForDp { n: usize, max: usize },
    #[error("n = {n} exceeds the {what} limit of {max}")]
    TooLarge { what: &'static str, n: usize, max: usize },
    #[error("{0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    SubsetDp,
    BranchAndBound,
    #[default]
    Auto,
}

/// Largest `n` for which [`Algorithm::Auto`] picks the subset DP.
pub const AUTO_DP_MAX_N: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveOptions {
    pub algorithm: Algorithm,
    /// Branch-and-bound node budget. The DP runs to completion.
    pub node_limit: Option<u64>,
    /// Branch-and-bound wall-clock budget.
    pub time_limit: Option<Duration>,
}

impl SolveOptions {
    pub fn with_algorithm(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            ..Self::default()
        }
    }
}

/// Result of an exact search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CycleSearch {
    /// Best cycle found. `optimal` on the certificate is false when a limit
    /// stopped the search early.
    Found(Certificate),
    NotHamiltonian,
    /// A limit was hit before any Hamilton cycle was found.
    Undecided,
}

impl CycleSearch {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            CycleSearch::Found(c) => Some(c),
            _ => None,
        }
    }

    pub fn sigma_max(&self) -> Option<usize> {
        self.certificate().map(|c| c.sigma_max)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOutcome {
    pub search: CycleSearch,
    pub algorithm: Algorithm,
    /// DP states relaxed or branch-and-bound nodes expanded.
    pub work: u64,
    pub elapsed: Duration,
}

/// Maximum `sigma_max` over all Hamilton cycles of `g`.
pub fn max_discrepancy_cycle(g: &OrientedGraph, opts: &SolveOptions) -> Result<ExactOutcome, SolveError> {
    if g.n() < 3 {
        return Err(SolveError::TooFewVertices(g.n()));
    }
    let algorithm = match opts.algorithm {
        Algorithm::Auto if g.n() <= AUTO_DP_MAX_N => Algorithm::SubsetDp,
        Algorithm::Auto => Algorithm::BranchAndBound,
        a => a,
    };
    let start = Instant::now();
    let (search, work) = match algorithm {
        Algorithm::SubsetDp => {
            let mut dp = SubsetDp::new(g.n())?;
            let search = dp.solve(g);
            (search, dp.states_relaxed())
        }
        _ => bb::solve(g, opts)?,
    };
    Ok(ExactOutcome {
        search,
        algorithm,
        work,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use rand::seq::SliceRandom;

    use super::*;
    use crate::discrepancy::{validate_certificate, Method, Spanning};
    use crate::extremal::extremal_graph;
    use crate::graph::{random_oriented, OrientedGraph};
    use crate::rng::rng_from_seed;

    fn solve(g: &OrientedGraph, algorithm: Algorithm) -> CycleSearch {
        max_discrepancy_cycle(g, &SolveOptions::with_algorithm(algorithm)).unwrap().search
    }

    #[test]
    fn small_examples_both_algorithms() {
        for algo in [Algorithm::SubsetDp, Algorithm::BranchAndBound] {
            assert_eq!(solve(&OrientedGraph::directed_cycle(3), algo).sigma_max(), Some(3));
            assert_eq!(solve(&OrientedGraph::directed_cycle(4), algo).sigma_max(), Some(4));
            let star = OrientedGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
            assert_eq!(solve(&star, algo), CycleSearch::NotHamiltonian);
            assert_eq!(solve(&OrientedGraph::empty(5), algo), CycleSearch::NotHamiltonian);
        }
        assert_eq!(
            max_discrepancy_cycle(&OrientedGraph::empty(2), &SolveOptions::default()),
            Err(SolveError::TooFewVertices(2))
        );
    }

    #[test]
    fn dp_guard_directs_to_bb() {
        let g = OrientedGraph::empty(DP_MAX_N + 1);
        let err = max_discrepancy_cycle(&g, &SolveOptions::with_algorithm(Algorithm::SubsetDp)).unwrap_err();
        assert!(err.to_string().contains("branch-and-bound"));
    }

    #[test]
    fn extremal_12_14_optimum_is_7() {
        let (_, g) = extremal_graph(12, 14).unwrap();
        for algo in [Algorithm::SubsetDp, Algorithm::BranchAndBound] {
            let search = solve(&g, algo);
            let cert = search.certificate().unwrap();
            assert_eq!(cert.sigma_max, 7);
            assert!(cert.optimal);
            assert!(validate_certificate(&g, cert, Spanning::Required).valid);
        }
    }

    #[test]
    fn extremal_8_8_brute_force() {
        let (p, g) = extremal_graph(8, 8).unwrap();
        assert_eq!((p.r, p.t, p.ell), (2, 4, 4));
        assert_eq!(brute_force_cycle(&g).unwrap().sigma_max(), Some(4));
        assert_eq!(solve(&g, Algorithm::SubsetDp).sigma_max(), Some(4));
    }

    #[test]
    fn dp_matches_brute_force_on_random_graphs() {
        for seed in 0..200u64 {
            let n = 3 + (seed % 6) as usize;
            let p = [0.4, 0.7, 1.0][(seed % 3) as usize];
            let g = random_oriented(n, p, seed).unwrap();
            let dp = solve(&g, Algorithm::SubsetDp);
            let bb = solve(&g, Algorithm::BranchAndBound);
            let brute = brute_force_cycle(&g).unwrap();
            assert_eq!(dp.sigma_max(), brute.sigma_max(), "seed {seed}");
            assert_eq!(bb.sigma_max(), brute.sigma_max(), "seed {seed}");
        }
    }

    #[test]
    fn optimum_never_beaten_by_random_cycles() {
        let g = random_oriented(9, 1.0, 77).unwrap();
        let best = solve(&g, Algorithm::SubsetDp).sigma_max().unwrap();
        let mut rng = rng_from_seed(5);
        let mut order: Vec<usize> = (0..9).collect();
        for _ in 0..10_000 {
            order.shuffle(&mut rng);
            let cert = Certificate::cycle(&g, order.clone(), Method::External, false).unwrap();
            assert!(cert.sigma_max <= best);
        }
    }

    #[test]
    fn adding_edges_never_lowers_the_optimum() {
        for seed in 0..60u64 {
            let mut g = random_oriented(7, 0.6, seed).unwrap();
            let mut last = solve(&g, Algorithm::SubsetDp).sigma_max();
            let mut rng = rng_from_seed(seed);
            let mut missing: Vec<(usize, usize)> =
                (0..7).flat_map(|u| (u + 1..7).map(move |v| (u, v))).filter(|&(u, v)| !g.adjacent(u, v)).collect();
            missing.shuffle(&mut rng);
            for (u, v) in missing {
                g.add_edge(u, v).unwrap();
                let now = solve(&g, Algorithm::SubsetDp).sigma_max();
                assert!(now >= last, "seed {seed}");
                last = now;
            }
        }
    }

    #[test]
    fn bb_limits_flag_partial_results() {
        let g = random_oriented(30, 0.5, 3).unwrap();
        let opts = SolveOptions {
            algorithm: Algorithm::BranchAndBound,
            node_limit: Some(50),
            time_limit: None,
        };
        let outcome = max_discrepancy_cycle(&g, &opts).unwrap();
        match outcome.search {
            CycleSearch::Found(c) => assert!(!c.optimal),
            CycleSearch::Undecided => {}
            CycleSearch::NotHamiltonian => panic!("limit hit cannot prove non-hamiltonicity"),
        }
        assert!(outcome.work <= 50);
    }
}
