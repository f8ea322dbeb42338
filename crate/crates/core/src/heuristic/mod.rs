//! Heuristic maximum-discrepancy Hamilton cycles for graphs beyond the exact
//! solvers' reach.
//!
//! A start cycle comes from path extension and rotation on `U(G)`, which
//! always succeeds when `sigma2 >= n`. Local search then improves
//! `sigma_max`. Restarts use randomised start cycles and scan orders; restart
//! `r` draws from `derive_seed(derive_seed(seed, RESTART), r)`.

mod local;
mod ore;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discrepancy::{validate_certificate, Certificate, Method, Spanning, Violation};
use crate::graph::OrientedGraph;
use crate::rng::{derive_seed, rng_from_seed, streams};

pub(crate) use local::Tour;
pub use ore::{ore_cycle, ore_hamilton, OreFailure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSearchBudget {
    /// Improving moves applied per restart.
    pub max_moves: u64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for LocalSearchBudget {
    fn default() -> Self {
        Self {
            max_moves: 1_000_000,
            restarts: 8,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeuristicError {
    #[error("start certificate is not a Hamilton cycle: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidStart(Vec<Violation>),
    #[error("no Hamilton cycle found in {restarts} restarts (last failure: {last:?})")]
    NoCycle { restarts: usize, last: OreFailure },
    #[error("need at least one restart")]
    NoRestarts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicOutcome {
    pub certificate: Certificate,
    /// Index of the restart that produced the certificate.
    pub best_restart: usize,
    /// Restarts actually run; the loop stops early at `sigma_max == n`.
    pub restarts_run: usize,
    /// Restarts whose start construction failed.
    pub construction_failures: usize,
    pub moves: u64,
}

/// Local search from `start`. The result never has a smaller `sigma_max`.
pub fn improve_discrepancy(
    g: &OrientedGraph,
    start: &Certificate,
    budget: &LocalSearchBudget,
) -> Result<Certificate, HeuristicError> {
    let check = validate_certificate(g, start, Spanning::Required);
    if !check.valid || !start.cyclic {
        return Err(HeuristicError::InvalidStart(check.violations));
    }
    let nbrs = g.underlying();
    let mut tour = Tour::new(g, &nbrs, start.cycle.clone());
    tour.descend(budget.max_moves, &mut rng_from_seed(derive_seed(budget.seed, streams::RESTART)));
    Ok(Certificate::cycle(g, tour.into_sequence(), Method::Heuristic, false).expect("moves keep a Hamilton cycle"))
}

/// Best cycle over `budget.restarts` constructions followed by local search.
/// Ties keep the lowest restart index.
pub fn heuristic_max_discrepancy(
    g: &OrientedGraph,
    budget: &LocalSearchBudget,
) -> Result<HeuristicOutcome, HeuristicError> {
    if budget.restarts == 0 {
        return Err(HeuristicError::NoRestarts);
    }
    let n = g.n();
    let nbrs = g.underlying();
    let restart_root = derive_seed(budget.seed, streams::RESTART);
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    let mut restarts_run = 0;
    let mut failures = 0;
    let mut last_failure = None;
    let mut moves = 0;
    for r in 0..budget.restarts {
        restarts_run += 1;
        let mut rng = rng_from_seed(derive_seed(restart_root, r as u64));
        let start = if r == 0 {
            ore_cycle(g, 0, None)
        } else {
            let v = rand::Rng::gen_range(&mut rng, 0..n.max(1));
            ore_cycle(g, v, Some(&mut rng))
        };
        let cycle = match start {
            Ok(c) => c,
            Err(e) => {
                failures += 1;
                last_failure = Some(e);
                continue;
            }
        };
        let mut tour = Tour::new(g, &nbrs, cycle);
        moves += tour.descend(budget.max_moves, &mut rng);
        let value = tour.sigma_max();
        if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
            best = Some((value, r, tour.into_sequence()));
        }
        if value == n {
            break;
        }
    }
    match best {
        Some((_, best_restart, seq)) => Ok(HeuristicOutcome {
            certificate: Certificate::cycle(g, seq, Method::Heuristic, false).expect("moves keep a Hamilton cycle"),
            best_restart,
            restarts_run,
            construction_failures: failures,
            moves,
        }),
        None => Err(HeuristicError::NoCycle {
            restarts: restarts_run,
            last: last_failure.expect("every restart failed"),
        }),
    }
}
