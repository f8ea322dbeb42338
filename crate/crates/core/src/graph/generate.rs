use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{GraphError, OrientedGraph};
use crate::rng::{derive_seed, rng_from_seed};

/// Each unordered pair, in lexicographic order, is kept with probability `p`
/// and then oriented by a fair coin.
pub fn random_oriented(n: usize, p: f64, seed: u64) -> Result<OrientedGraph, GraphError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(GraphError::InvalidProbability(p));
    }
    let mut rng = rng_from_seed(seed);
    let mut g = OrientedGraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                if rng.gen_bool(0.5) {
                    g.insert_unchecked(u, v);
                } else {
                    g.insert_unchecked(v, u);
                }
            }
        }
    }
    Ok(g)
}

pub fn random_tournament(n: usize, seed: u64) -> OrientedGraph {
    random_oriented(n, 1.0, seed).expect("p = 1 is valid")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledGraph {
    pub graph: OrientedGraph,
    pub sigma2: usize,
    /// Number of candidates drawn, including the accepted one.
    pub attempts: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingFailure {
    pub attempts: usize,
    pub best_sigma2: Option<usize>,
}

/// Rejection-samples `random_oriented(n, p, ·)` until `sigma2 >= threshold`.
/// Attempt `i` uses the derived seed `derive_seed(seed, i)`.
pub fn sample_with_sigma2(
    n: usize,
    p: f64,
    threshold: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<Result<SampledGraph, SamplingFailure>, GraphError> {
    let mut best = None;
    for attempt in 0..max_attempts {
        let graph = random_oriented(n, p, derive_seed(seed, attempt as u64))?;
        let sigma2 = graph.sigma2()?;
        best = Some(best.map_or(sigma2, |b: usize| b.max(sigma2)));
        if sigma2 >= threshold {
            return Ok(Ok(SampledGraph {
                graph,
                sigma2,
                attempts: attempt + 1,
            }));
        }
    }
    Ok(Err(SamplingFailure {
        attempts: max_attempts,
        best_sigma2: best,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes_and_determinism() {
        assert!(random_oriented(9, 1.0, 3).unwrap().is_tournament());
        let empty = random_oriented(9, 0.0, 3).unwrap();
        assert_eq!(empty.edge_count(), 0);
        assert_eq!(empty.sigma2().unwrap(), 0);
        assert_eq!(random_oriented(20, 0.5, 11).unwrap(), random_oriented(20, 0.5, 11).unwrap());
        assert_ne!(random_oriented(20, 0.5, 11).unwrap(), random_oriented(20, 0.5, 12).unwrap());
        assert!(matches!(random_oriented(3, 1.5, 0), Err(GraphError::InvalidProbability(_))));
    }

    #[test]
    fn sampling_reports_failure() {
        let ok = sample_with_sigma2(10, 0.9, 10, 5, 200).unwrap().unwrap();
        assert!(ok.sigma2 >= 10);
        assert!(ok.attempts >= 1);
        let fail = sample_with_sigma2(10, 0.1, 18, 5, 4).unwrap().unwrap_err();
        assert_eq!(fail.attempts, 4);
        assert!(fail.best_sigma2.unwrap() < 18);
    }
}
