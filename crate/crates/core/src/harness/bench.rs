//! Benchmark tables over seeded instance families.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::exact::{max_discrepancy_cycle, Algorithm, CycleSearch, SolveOptions, DP_MAX_N};
use crate::extremal::{extremal_graph, feasible_h_values};
use crate::graph::{random_oriented, random_tournament, OrientedGraph};
use crate::heuristic::{heuristic_max_discrepancy, LocalSearchBudget};
use crate::pipeline::{run_pipeline, PipelineConfig};
use crate::rng::{derive_seed, streams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// For each `n`, the smallest feasible `h >= ceil(h_ratio * n)`, or the
    /// largest feasible `h` when none is that large.
    Extremal { h_ratio: f64 },
    RandomTournament,
    RandomP { p: f64 },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Extremal { .. } => f.write_str("extremal"),
            Family::RandomTournament => f.write_str("random-tournament"),
            Family::RandomP { .. } => f.write_str("random-p"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchAlgorithm {
    Dp,
    Bb,
    Heuristic,
    Pipeline,
}

impl fmt::Display for BenchAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchAlgorithm::Dp => "dp",
            BenchAlgorithm::Bb => "bb",
            BenchAlgorithm::Heuristic => "heuristic",
            BenchAlgorithm::Pipeline => "pipeline",
        })
    }
}

impl FromStr for BenchAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "dp" => Ok(BenchAlgorithm::Dp),
            "bb" => Ok(BenchAlgorithm::Bb),
            "heuristic" | "heur" => Ok(BenchAlgorithm::Heuristic),
            "pipeline" => Ok(BenchAlgorithm::Pipeline),
            other => Err(format!("unknown algorithm {other:?} (expected dp, bb, heuristic or pipeline)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub family: Family,
    pub sizes: Vec<usize>,
    /// Instances per size.
    pub instances: usize,
    pub algorithms: Vec<BenchAlgorithm>,
    pub seed: u64,
    /// Branch-and-bound node budget per instance.
    pub node_limit: Option<u64>,
    /// Branch-and-bound time budget per instance.
    pub time_limit_ms: Option<u64>,
    pub restarts: usize,
    pub parallel: usize,
}

impl Default for BenchSpec {
    fn default() -> Self {
        Self {
            family: Family::Extremal { h_ratio: 1.2 },
            sizes: vec![10, 12, 14],
            instances: 1,
            algorithms: vec![BenchAlgorithm::Dp, BenchAlgorithm::Bb],
            seed: 0,
            node_limit: None,
            time_limit_ms: None,
            restarts: LocalSearchBudget::default().restarts,
            parallel: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Ok,
    NotHamiltonian,
    /// A node or time limit stopped the search; `value` is a lower bound.
    BudgetExhausted,
    /// The algorithm found no cycle.
    NoCycle,
    /// The instance is outside the algorithm's size limit.
    TooLarge,
    /// The family has no instance at this size.
    NoInstance,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Ok => "ok",
            RowStatus::NotHamiltonian => "not-hamiltonian",
            RowStatus::BudgetExhausted => "budget-exhausted",
            RowStatus::NoCycle => "no-cycle",
            RowStatus::TooLarge => "too-large",
            RowStatus::NoInstance => "no-instance",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: usize,
    pub n: usize,
    pub sigma2: Option<usize>,
    pub algorithm: BenchAlgorithm,
    pub value: Option<usize>,
    pub optimal: bool,
    /// DP states, branch-and-bound nodes or local-search moves.
    pub work: u64,
    pub wall_time_ms: u128,
    pub status: RowStatus,
}

pub const CSV_HEADER: &str = "instance,n,sigma2,algorithm,value,optimal,work,wall_time_ms,status";

impl BenchRow {
    pub fn csv_line(&self) -> String {
        let opt = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.n,
            opt(self.sigma2),
            self.algorithm,
            opt(self.value),
            self.optimal,
            self.work,
            self.wall_time_ms,
            self.status
        )
    }
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

/// Instance `index` of the spec, or `None` when the family has no member of
/// that size.
pub fn bench_instance(spec: &BenchSpec, index: usize) -> Option<(usize, OrientedGraph)> {
    let n = spec.sizes[index / spec.instances.max(1)];
    let seed = derive_seed(derive_seed(spec.seed, streams::BENCH), index as u64);
    let g = match spec.family {
        Family::Extremal { h_ratio } => {
            let hs = feasible_h_values(n);
            let want = (h_ratio * n as f64).ceil() as usize;
            let h = hs.iter().copied().find(|&h| h >= want).or(hs.last().copied())?;
            extremal_graph(n, h).ok()?.1
        }
        Family::RandomTournament => random_tournament(n, seed),
        Family::RandomP { p } => random_oriented(n, p, seed).ok()?,
    };
    Some((n, g))
}

fn exact_row(g: &OrientedGraph, algorithm: Algorithm, spec: &BenchSpec) -> (Option<usize>, bool, u64, RowStatus) {
    let opts = SolveOptions {
        algorithm,
        node_limit: spec.node_limit,
        time_limit: spec.time_limit_ms.map(Duration::from_millis),
    };
    match max_discrepancy_cycle(g, &opts) {
        Ok(out) => match out.search {
            CycleSearch::Found(c) => {
                let status = if c.optimal { RowStatus::Ok } else { RowStatus::BudgetExhausted };
                (Some(c.sigma_max), c.optimal, out.work, status)
            }
            CycleSearch::NotHamiltonian => (None, true, out.work, RowStatus::NotHamiltonian),
            CycleSearch::Undecided => (None, false, out.work, RowStatus::BudgetExhausted),
        },
        Err(_) => (None, false, 0, RowStatus::TooLarge),
    }
}

fn run_one(spec: &BenchSpec, index: usize) -> Vec<BenchRow> {
    let Some((n, g)) = bench_instance(spec, index) else {
        let n = spec.sizes[index / spec.instances.max(1)];
        return spec
            .algorithms
            .iter()
            .map(|&algorithm| BenchRow {
                instance: index,
                n,
                sigma2: None,
                algorithm,
                value: None,
                optimal: false,
                work: 0,
                wall_time_ms: 0,
                status: RowStatus::NoInstance,
            })
            .collect();
    };
    let sigma2 = g.sigma2().ok();
    let seed = derive_seed(derive_seed(spec.seed, streams::BENCH), index as u64);
    let mut rows = Vec::new();
    for &algorithm in &spec.algorithms {
        let started = Instant::now();
        let (value, optimal, work, status) = match algorithm {
            BenchAlgorithm::Dp if n > DP_MAX_N => (None, false, 0, RowStatus::TooLarge),
            BenchAlgorithm::Dp => exact_row(&g, Algorithm::SubsetDp, spec),
            BenchAlgorithm::Bb => exact_row(&g, Algorithm::BranchAndBound, spec),
            BenchAlgorithm::Heuristic => {
                let budget = LocalSearchBudget {
                    restarts: spec.restarts.max(1),
                    seed,
                    ..LocalSearchBudget::default()
                };
                match heuristic_max_discrepancy(&g, &budget) {
                    Ok(out) => (Some(out.certificate.sigma_max), false, out.moves, RowStatus::Ok),
                    Err(_) => (None, false, 0, RowStatus::NoCycle),
                }
            }
            BenchAlgorithm::Pipeline => {
                let config = PipelineConfig {
                    seed,
                    fallback: false,
                    ..PipelineConfig::default()
                };
                match run_pipeline(&g, &config) {
                    Ok(report) => match report.final_sigma_max {
                        Some(v) => (Some(v), false, 0, RowStatus::Ok),
                        None => (None, false, 0, RowStatus::NoCycle),
                    },
                    Err(_) => (None, false, 0, RowStatus::TooLarge),
                }
            }
        };
        rows.push(BenchRow {
            instance: index,
            n,
            sigma2,
            algorithm,
            value,
            optimal,
            work,
            wall_time_ms: started.elapsed().as_millis(),
            status,
        });
    }
    rows
}

/// Runs every algorithm on every instance. Rows are ordered by instance
/// index, then by the order of `spec.algorithms`, whatever `parallel` is.
pub fn run_bench(spec: &BenchSpec) -> Vec<BenchRow> {
    let total = spec.sizes.len() * spec.instances.max(1);
    let workers = spec.parallel.clamp(1, total.max(1));
    let mut per_instance: Vec<Vec<BenchRow>> = vec![Vec::new(); total];
    if workers == 1 {
        for (i, slot) in per_instance.iter_mut().enumerate() {
            *slot = run_one(spec, i);
        }
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let done = std::sync::Mutex::new(&mut per_instance);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= total {
                        break;
                    }
                    let rows = run_one(spec, i);
                    done.lock().expect("bench worker panicked")[i] = rows;
                });
            }
        });
    }
    per_instance.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dp_and_bb_agree_on_extremal() {
        let rows = run_bench(&BenchSpec::default());
        assert_eq!(rows.len(), 6);
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].value, pair[1].value);
            assert!(pair[0].optimal && pair[1].optimal);
            assert_eq!(pair[0].value, pair[0].sigma2.map(|h| h / 2));
        }
    }

    #[test]
    fn heuristic_rows_meet_the_floor() {
        let spec = BenchSpec {
            sizes: (40..=200).step_by(40).collect(),
            algorithms: vec![BenchAlgorithm::Heuristic],
            restarts: 2,
            ..BenchSpec::default()
        };
        for row in run_bench(&spec) {
            assert_eq!(row.status, RowStatus::Ok);
            assert!(row.value.unwrap() >= row.n.div_ceil(2));
        }
    }

    #[test]
    fn parallel_order_and_values_match() {
        let spec = BenchSpec {
            family: Family::RandomP { p: 0.7 },
            sizes: vec![8, 9, 10],
            instances: 3,
            algorithms: vec![BenchAlgorithm::Dp, BenchAlgorithm::Heuristic],
            seed: 11,
            ..BenchSpec::default()
        };
        let strip = |rows: Vec<BenchRow>| {
            rows.into_iter()
                .map(|r| BenchRow { wall_time_ms: 0, ..r })
                .collect::<Vec<_>>()
        };
        let serial = strip(run_bench(&spec));
        let parallel = strip(run_bench(&BenchSpec { parallel: 4, ..spec.clone() }));
        assert_eq!(serial, parallel);
        assert_eq!(serial.len(), 18);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let spec = BenchSpec {
            sizes: vec![30],
            algorithms: vec![BenchAlgorithm::Dp, BenchAlgorithm::Bb],
            node_limit: Some(10),
            ..BenchSpec::default()
        };
        let rows = run_bench(&spec);
        assert_eq!(rows[0].status, RowStatus::TooLarge);
        assert_eq!(rows[1].status, RowStatus::BudgetExhausted);
    }
}
