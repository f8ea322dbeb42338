//! End-to-end construction of a high-discrepancy Hamilton cycle:
//! absorbing path, reservoir, almost-cover by paths, connection into a cycle
//! and absorption of the vertices left over.
//!
//! Computational failures are reported in the [`PipelineReport`]; only bad
//! input or configuration is an `Err`.

use rand::Rng as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::absorbers::{absorb_leftovers, build_absorbing_path, build_reservoir, AbsorberConfig, AbsorbingPath, Reservoir};
use crate::bitset::VertexSet;
use crate::discrepancy::{
    aligned, validate_certificate, Certificate, CycleCertificate, Method, PathCertificate, Spanning,
};
use crate::graph::OrientedGraph;
use crate::heuristic::{heuristic_max_discrepancy, LocalSearchBudget};
use crate::rng::{derive_seed, rng_from_seed, streams};
use crate::tilings::{find_tiling, tile_path, tiling_plan, TilingSearch, DEFAULT_NODE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverMode {
    /// Greedy aligned path growth.
    #[default]
    Greedy,
    /// One directed path per tile of a tournament tiling (small graphs).
    Tiling,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub absorbers: AbsorberConfig,
    /// Maximum number of cover paths.
    pub cover_max_paths: usize,
    /// Coverage fraction the cover is expected to reach; reported, not enforced.
    pub cover_min_fraction: f64,
    pub cover: CoverMode,
    /// Orderings tried when joining paths into a cycle.
    pub connect_restarts: usize,
    /// Fall back to the local-search heuristic when a stage fails.
    pub fallback: bool,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            absorbers: AbsorberConfig::default(),
            cover_max_paths: 32,
            cover_min_fraction: 0.95,
            cover: CoverMode::Greedy,
            connect_restarts: 64,
            fallback: true,
            seed: 0,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        self.absorbers.validate().map_err(|e| PipelineError::Config(e.to_string()))?;
        if self.cover_max_paths == 0 || self.connect_restarts == 0 {
            return Err(PipelineError::Config(
                "cover_max_paths and connect_restarts must be positive".into(),
            ));
        }
        if !(self.cover_min_fraction > 0.0 && self.cover_min_fraction < 1.0) {
            return Err(PipelineError::Config(format!(
                "cover_min_fraction = {} is outside (0, 1)",
                self.cover_min_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("invalid pipeline configuration: {0}")]
    Config(String),
    #[error("a Hamilton cycle needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    AbsorbingPath,
    Reservoir,
    Cover,
    Connect,
    Absorb,
    Validate,
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: Stage,
    pub message: String,
}

/// Vertex-disjoint paths, each traversed in its dominant direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCover {
    pub paths: Vec<PathCertificate>,
    /// Vertices not excluded.
    pub available: usize,
    pub covered: usize,
    /// Sum of `sigma_max` over the paths.
    pub sigma_max_total: usize,
}

impl PathCover {
    pub fn fraction(&self) -> f64 {
        if self.available == 0 {
            1.0
        } else {
            self.covered as f64 / self.available as f64
        }
    }

    fn from_paths(paths: Vec<PathCertificate>, available: usize) -> Self {
        Self {
            covered: paths.iter().map(|p| p.len()).sum(),
            sigma_max_total: paths.iter().map(|p| p.sigma_max).sum(),
            paths,
            available,
        }
    }
}

/// Grows paths one at a time in `G - excluded`. Each step extends either end,
/// aligned steps before opposed ones, choosing the candidate with the fewest
/// free neighbours (ties by a seeded key). Stops after `cover_max_paths`.
pub fn greedy_path_cover(g: &OrientedGraph, excluded: &VertexSet, config: &PipelineConfig) -> PathCover {
    let n = g.n();
    let nbrs = g.underlying();
    let mut rng = rng_from_seed(derive_seed(config.seed, streams::COVER));
    let keys: Vec<u64> = (0..n).map(|_| rng.gen()).collect();
    let mut free = VertexSet::full(n);
    free.difference_with(excluded);
    let available = free.len();
    let free_degree = |v: usize, free: &VertexSet| nbrs[v].intersection_len(free);
    let pick = |cands: &VertexSet, free: &VertexSet| cands.iter().min_by_key(|&c| (free_degree(c, free), keys[c]));

    let mut paths = Vec::new();
    while paths.len() < config.cover_max_paths && !free.is_empty() {
        let start = pick(&free, &free).unwrap();
        free.remove(start);
        let mut path = std::collections::VecDeque::from([start]);
        loop {
            let (back, front) = (*path.back().unwrap(), *path.front().unwrap());
            let forward = g.out_neighbors(back).intersection(&free);
            let backward = g.in_neighbors(front).intersection(&free);
            let step = if let Some(v) = pick(&forward, &free) {
                Some((true, v))
            } else if let Some(v) = pick(&backward, &free) {
                Some((false, v))
            } else if let Some(v) = pick(&nbrs[back].intersection(&free), &free) {
                Some((true, v))
            } else {
                pick(&nbrs[front].intersection(&free), &free).map(|v| (false, v))
            };
            let Some((at_back, v)) = step else { break };
            free.remove(v);
            if at_back {
                path.push_back(v);
            } else {
                path.push_front(v);
            }
        }
        paths.push(Certificate::path(g, path.into(), Method::Pipeline).expect("path grows along edges"));
    }
    PathCover::from_paths(paths, available)
}

/// One directed path per tile of a tiling of `G - excluded`.
fn tiling_cover(g: &OrientedGraph, excluded: &VertexSet) -> Result<PathCover, String> {
    let rest: Vec<usize> = (0..g.n()).filter(|&v| !excluded.contains(v)).collect();
    if rest.len() < 2 {
        return Err("fewer than 2 vertices to tile".into());
    }
    let sub = g.induced(&rest);
    let sigma2 = sub.sigma2().map_err(|e| e.to_string())?;
    let plan = tiling_plan(rest.len(), sigma2).map_err(|e| e.to_string())?;
    let cert = match find_tiling(&sub, &plan, DEFAULT_NODE_LIMIT).map_err(|e| e.to_string())? {
        TilingSearch::Found(c) => c,
        TilingSearch::NotFound { nodes, .. } => return Err(format!("no tiling for plan {plan} ({nodes} nodes)")),
    };
    let paths = cert
        .tiles
        .iter()
        .map(|tile| {
            let labels: Vec<usize> = tile.iter().map(|&i| rest[i]).collect();
            tile_path(g, &labels).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PathCover::from_paths(paths, rest.len()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connection {
    /// Cycle sequence starting with the absorbing path.
    pub cycle: Vec<usize>,
    pub junctions: usize,
    pub direct: usize,
    pub via_reservoir: usize,
    /// Junctions joined through an uncovered non-reservoir vertex.
    pub via_spare: usize,
    /// Vertices cut from path ends to make junctions fit; they are
    /// absorbed later unless used as connectors.
    pub trimmed: usize,
    pub restart: usize,
    pub search_nodes: u64,
}

/// Search nodes per connection restart.
const CONNECT_NODE_LIMIT: u64 = 20_000;
/// Vertices that may be cut from each end of a path.
const MAX_TRIM: usize = 2;

#[derive(Debug, Clone, Copy)]
struct Step {
    piece: usize,
    trim_front: usize,
    trim_back: usize,
    connector: Option<usize>,
}

struct Joiner<'a> {
    g: &'a OrientedGraph,
    paths: &'a [PathCertificate],
    reservoir: VertexSet,
    first: usize,
    keys: Vec<u64>,
    nodes: u64,
    used: Vec<bool>,
    pool: VertexSet,
    steps: Vec<Step>,
    closing: Option<Option<usize>>,
}

impl Joiner<'_> {
    /// The piece as traversed, after trimming.
    fn segment(&self, step: &Step) -> &[usize] {
        let seq = &self.paths[step.piece].cycle;
        &seq[step.trim_front..seq.len() - step.trim_back]
    }

    fn trimmed(&self, step: &Step) -> Vec<usize> {
        let seq = &self.paths[step.piece].cycle;
        let len = seq.len();
        let mut cut = seq[..step.trim_front].to_vec();
        cut.extend(&seq[len - step.trim_back..]);
        cut
    }

    /// Best free connector between `x` and `y`: reservoir vertices first,
    /// then more aligned steps, then the smaller label.
    fn connector(&self, x: usize, y: usize) -> Option<usize> {
        let mut c = self.g.neighbors(x).intersection(&self.g.neighbors(y));
        c.intersect_with(&self.pool);
        c.iter().max_by_key(|&w| {
            (
                self.reservoir.contains(w),
                aligned(self.g, x, w) + aligned(self.g, w, y),
                std::cmp::Reverse(w),
            )
        })
    }

    /// Junction tier from `x` into `y`: 0 aligned edge, 1 opposed edge,
    /// 2 through a connector.
    fn junction(&self, x: usize, y: usize) -> Option<(usize, Option<usize>)> {
        if self.g.has_edge(x, y) {
            Some((0, None))
        } else if self.g.adjacent(x, y) {
            Some((1, None))
        } else {
            self.connector(x, y).map(|w| (2, Some(w)))
        }
    }

    fn dfs(&mut self, end: usize, placed: usize) -> bool {
        self.nodes += 1;
        if self.nodes > CONNECT_NODE_LIMIT {
            return false;
        }
        if placed == self.paths.len() {
            if let Some((_, w)) = self.junction(end, self.first) {
                self.closing = Some(w);
                return true;
            }
            return false;
        }
        let mut options = Vec::new();
        for k in 0..self.paths.len() {
            if self.used[k] {
                continue;
            }
            let len = self.paths[k].len();
            for trim_front in 0..=MAX_TRIM.min(len - 1) {
                for trim_back in 0..=MAX_TRIM.min(len - 1 - trim_front) {
                    let step = Step {
                        piece: k,
                        trim_front,
                        trim_back,
                        connector: None,
                    };
                    if let Some((tier, w)) = self.junction(end, self.segment(&step)[0]) {
                        let rank = (trim_front + trim_back, tier);
                        options.push((rank, self.keys[k], Step { connector: w, ..step }));
                    }
                }
            }
        }
        options.sort_unstable_by_key(|&(rank, key, step)| (rank, key, step.trim_front, step.trim_back));
        for (_, _, step) in options {
            self.used[step.piece] = true;
            if let Some(w) = step.connector {
                self.pool.remove(w);
            }
            let cut = self.trimmed(&step);
            for &v in &cut {
                self.pool.insert(v);
            }
            self.steps.push(step);
            let new_end = *self.segment(&step).last().unwrap();
            if self.dfs(new_end, placed + 1) {
                return true;
            }
            self.steps.pop();
            for &v in &cut {
                self.pool.remove(v);
            }
            if let Some(w) = step.connector {
                self.pool.insert(w);
            }
            self.used[step.piece] = false;
            if self.nodes > CONNECT_NODE_LIMIT {
                return false;
            }
        }
        false
    }
}

/// Joins the absorbing path and the cover paths into one cycle.
///
/// Paths keep their dominant direction. Each junction uses a direct edge
/// when possible, otherwise one connector vertex: reservoir vertices first,
/// then any vertex on no piece. When neither fits, up to two vertices may be
/// cut from each end of a path; cut vertices join the connector pool and are
/// left for absorption otherwise. The order of paths is found by a bounded
/// depth-first search. Restart 0 prefers index order; later restarts use
/// seeded random preferences.
pub fn connect_all(
    g: &OrientedGraph,
    paths: &[PathCertificate],
    absorbing: &AbsorbingPath,
    reservoir: &Reservoir,
    restarts: usize,
    seed: u64,
) -> Result<Connection, StageFailure> {
    let n = g.n();
    let mut on_piece = absorbing.vertex_set();
    for p in paths {
        for &v in &p.cycle {
            on_piece.insert(v);
        }
    }
    let mut pool = VertexSet::full(n);
    pool.difference_with(&on_piece);
    let abs_seq = &absorbing.path.cycle;
    let mut total_nodes = 0;
    for restart in 0..restarts.max(1) {
        let mut rng = rng_from_seed(derive_seed(derive_seed(seed, streams::CONNECT), restart as u64));
        let keys = if restart == 0 {
            (0..paths.len() as u64).collect()
        } else {
            (0..paths.len()).map(|_| rng.gen()).collect()
        };
        let mut joiner = Joiner {
            g,
            paths,
            reservoir: reservoir.set(n),
            first: abs_seq[0],
            keys,
            nodes: 0,
            used: vec![false; paths.len()],
            pool: pool.clone(),
            steps: Vec::new(),
            closing: None,
        };
        let found = joiner.dfs(abs_seq[abs_seq.len() - 1], 0);
        total_nodes += joiner.nodes;
        if !found {
            continue;
        }
        let mut cycle = abs_seq.clone();
        let (mut direct, mut via_reservoir, mut via_spare) = (0, 0, 0);
        let mut count = |w: Option<usize>, cycle: &mut Vec<usize>| match w {
            None => direct += 1,
            Some(w) => {
                cycle.push(w);
                if joiner.reservoir.contains(w) {
                    via_reservoir += 1;
                } else {
                    via_spare += 1;
                }
            }
        };
        for step in &joiner.steps {
            count(step.connector, &mut cycle);
            cycle.extend_from_slice(joiner.segment(step));
        }
        count(joiner.closing.expect("set on success"), &mut cycle);
        if cycle.len() < 3 {
            break;
        }
        return Ok(Connection {
            cycle,
            junctions: paths.len() + 1,
            direct,
            via_reservoir,
            via_spare,
            trimmed: joiner.steps.iter().map(|s| s.trim_front + s.trim_back).sum(),
            restart,
            search_nodes: total_nodes,
        });
    }
    Err(StageFailure {
        stage: Stage::Connect,
        message: format!(
            "no ordering of {} paths closed into a cycle in {restarts} restarts ({total_nodes} search nodes)",
            paths.len()
        ),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorbingSummary {
    pub vertices: usize,
    pub budget: usize,
    pub gadgets: usize,
    pub strong_gadgets: usize,
    pub connectors: usize,
    pub sigma_max: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReservoirSummary {
    pub size: usize,
    pub cap: usize,
    pub pairs_audited: usize,
    pub pairs_uncovered: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverSummary {
    pub mode: CoverMode,
    pub paths: usize,
    pub available: usize,
    pub covered: usize,
    pub fraction: f64,
    pub meets_min_fraction: bool,
    pub sigma_max_total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorptionSummary {
    pub leftovers: usize,
    pub budget: usize,
    /// More leftovers than `mu n`; absorption was still attempted.
    pub over_budget: bool,
    pub strong_used: usize,
    pub weak_used: usize,
    pub sigma_plus_before: usize,
    pub sigma_plus_after: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub n: usize,
    pub sigma2: Option<usize>,
    pub seed: u64,
    /// `sigma2 / 2`, the value the construction aims at.
    pub target: f64,
    pub warnings: Vec<String>,
    pub absorbing: Option<AbsorbingSummary>,
    pub reservoir: Option<ReservoirSummary>,
    pub cover: Option<CoverSummary>,
    pub connection: Option<Connection>,
    pub absorption: Option<AbsorptionSummary>,
    /// First failing stage of the main construction.
    pub failure: Option<StageFailure>,
    pub fallback_used: bool,
    pub fallback_failure: Option<String>,
    pub final_sigma_max: Option<usize>,
    /// `final_sigma_max >= cover sigma_max_total` when both exist.
    pub accounting_holds: Option<bool>,
    pub certificate: Option<CycleCertificate>,
}

impl PipelineReport {
    /// A certificate was produced by the staged construction itself.
    pub fn constructed(&self) -> bool {
        self.certificate.is_some() && !self.fallback_used
    }

    pub fn succeeded(&self) -> bool {
        self.certificate.is_some()
    }
}

fn stage_err(stage: Stage, e: impl ToString) -> StageFailure {
    StageFailure {
        stage,
        message: e.to_string(),
    }
}

/// Runs the stages and returns the cycle in the report. With
/// `config.fallback`, a stage failure hands over to the heuristic solver.
pub fn run_pipeline(g: &OrientedGraph, config: &PipelineConfig) -> Result<PipelineReport, PipelineError> {
    config.validate()?;
    let n = g.n();
    if n < 3 {
        return Err(PipelineError::TooFewVertices(n));
    }
    let sigma2 = g.sigma2().ok();
    let mut report = PipelineReport {
        n,
        sigma2,
        seed: config.seed,
        target: sigma2.map_or(0.0, |s| s as f64 / 2.0),
        warnings: Vec::new(),
        absorbing: None,
        reservoir: None,
        cover: None,
        connection: None,
        absorption: None,
        failure: None,
        fallback_used: false,
        fallback_failure: None,
        final_sigma_max: None,
        accounting_holds: None,
        certificate: None,
    };
    if let Err(failure) = stages(g, config, &mut report) {
        report.failure = Some(failure);
        if config.fallback {
            report.fallback_used = true;
            let budget = LocalSearchBudget {
                seed: derive_seed(config.seed, streams::FALLBACK),
                ..Default::default()
            };
            match heuristic_max_discrepancy(g, &budget) {
                Ok(out) => {
                    report.final_sigma_max = Some(out.certificate.sigma_max);
                    report.certificate = Some(out.certificate);
                }
                Err(e) => report.fallback_failure = Some(e.to_string()),
            }
        }
    }
    Ok(report)
}

fn stages(g: &OrientedGraph, config: &PipelineConfig, report: &mut PipelineReport) -> Result<(), StageFailure> {
    let n = g.n();
    let cfg = &config.absorbers;
    if report.sigma2.is_none_or(|s| (s as f64) < (1.0 + cfg.eta) * n as f64) {
        report.warnings.push(format!(
            "sigma2 below (1 + eta) n = {:.1}; the construction is best effort",
            (1.0 + cfg.eta) * n as f64
        ));
    }

    let abs = build_absorbing_path(g, cfg, derive_seed(config.seed, streams::ABSORBING))
        .map_err(|e| stage_err(Stage::AbsorbingPath, e))?;
    report.absorbing = Some(AbsorbingSummary {
        vertices: abs.path.len(),
        budget: abs.budget,
        gadgets: abs.gadgets.len(),
        strong_gadgets: abs.strong_gadgets(),
        connectors: abs.connectors.len(),
        sigma_max: abs.path.sigma_max,
        warnings: abs.warnings.clone(),
    });

    let abs_set = abs.vertex_set();
    let reservoir = build_reservoir(g, &abs_set, cfg, derive_seed(config.seed, streams::RESERVOIR))
        .map_err(|e| stage_err(Stage::Reservoir, e))?;
    report.reservoir = Some(ReservoirSummary {
        size: reservoir.vertices.len(),
        cap: reservoir.cap,
        pairs_audited: reservoir.pairs_audited,
        pairs_uncovered: reservoir.pairs_uncovered,
    });

    let mut excluded = abs_set.clone();
    excluded.union_with(&reservoir.set(n));
    let (cover, mode) = match config.cover {
        CoverMode::Greedy => (greedy_path_cover(g, &excluded, config), CoverMode::Greedy),
        CoverMode::Tiling => match tiling_cover(g, &excluded) {
            Ok(c) => (c, CoverMode::Tiling),
            Err(e) => {
                report.warnings.push(format!("tiling cover unavailable ({e}); using the greedy cover"));
                (greedy_path_cover(g, &excluded, config), CoverMode::Greedy)
            }
        },
    };
    report.cover = Some(CoverSummary {
        mode,
        paths: cover.paths.len(),
        available: cover.available,
        covered: cover.covered,
        fraction: cover.fraction(),
        meets_min_fraction: cover.fraction() >= config.cover_min_fraction,
        sigma_max_total: cover.sigma_max_total,
    });

    let connection = connect_all(g, &cover.paths, &abs, &reservoir, config.connect_restarts, config.seed)?;
    let mut cycle = connection.cycle.clone();
    report.connection = Some(connection);

    let on_cycle = VertexSet::from_iter_with_capacity(n, cycle.iter().copied());
    let leftovers: Vec<usize> = (0..n).filter(|&v| !on_cycle.contains(v)).collect();
    let budget = cfg.leftover_budget(n);
    if leftovers.len() > budget {
        report.warnings.push(format!(
            "{} leftover vertices exceed the budget mu n = {budget}; absorbing anyway",
            leftovers.len()
        ));
    }
    let absorbed = absorb_leftovers(g, &abs, &leftovers).map_err(|e| stage_err(Stage::Absorb, e))?;
    report.absorption = Some(AbsorptionSummary {
        leftovers: leftovers.len(),
        budget,
        over_budget: leftovers.len() > budget,
        strong_used: absorbed.strong_used,
        weak_used: absorbed.weak_used,
        sigma_plus_before: absorbed.sigma_plus_before,
        sigma_plus_after: absorbed.sigma_plus_after,
    });
    // the cycle starts with the absorbing path, in its stored direction
    cycle.splice(..abs.path.len(), absorbed.path.cycle.iter().copied());

    let cert = Certificate::cycle(g, cycle, Method::Pipeline, false).map_err(|e| stage_err(Stage::Validate, e))?;
    let check = validate_certificate(g, &cert, Spanning::Required);
    if !check.valid {
        let msg = check.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
        return Err(stage_err(Stage::Validate, msg));
    }
    report.final_sigma_max = Some(cert.sigma_max);
    report.accounting_holds = Some(cert.sigma_max >= cover.sigma_max_total);
    report.certificate = Some(cert);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::extremal_graph;
    use crate::graph::{random_tournament, sample_with_sigma2};

    fn no_fallback(seed: u64) -> PipelineConfig {
        PipelineConfig {
            fallback: false,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn cover_examples() {
        let c = OrientedGraph::directed_cycle(9);
        let cover = greedy_path_cover(&c, &VertexSet::new(9), &PipelineConfig::default());
        assert_eq!(cover.paths.len(), 1);
        assert_eq!(cover.paths[0].sigma_plus, 8);
        let e = OrientedGraph::empty(50);
        let cover = greedy_path_cover(&e, &VertexSet::new(50), &PipelineConfig::default());
        assert_eq!(cover.paths.len(), 32);
        assert_eq!(cover.covered, 32);
    }

    #[test]
    fn tournament_60() {
        let g = random_tournament(60, 1);
        let r = run_pipeline(&g, &no_fallback(0)).unwrap();
        assert!(r.constructed(), "{:?}", r.failure);
        let cert = r.certificate.unwrap();
        assert!(validate_certificate(&g, &cert, Spanning::Required).valid);
        assert_eq!(r.connection.unwrap().via_reservoir, 0);
    }

    #[test]
    fn extremal_120_140() {
        let (_, g) = extremal_graph(120, 140).unwrap();
        let r = run_pipeline(&g, &PipelineConfig::default()).unwrap();
        assert!(r.constructed(), "{:?}", r.failure);
        assert!(r.final_sigma_max.unwrap() >= 60);
        assert_eq!(r.accounting_holds, Some(true));
        let c = r.connection.unwrap();
        assert!(c.via_reservoir + c.via_spare <= c.junctions);
    }

    #[test]
    fn isolated_vertex_fails_typed() {
        let mut g = random_tournament(40, 3);
        for v in 1..40 {
            g.remove_pair(0, v);
        }
        let r = run_pipeline(&g, &PipelineConfig::default()).unwrap();
        assert!(r.failure.is_some());
        assert!(r.fallback_used);
        assert!(r.fallback_failure.is_some());
        assert!(!r.succeeded());
    }

    #[test]
    fn deterministic_reports() {
        let g = sample_with_sigma2(60, 0.7, 72, 5, 200).unwrap().unwrap().graph;
        let a = serde_json::to_string(&run_pipeline(&g, &no_fallback(9)).unwrap()).unwrap();
        let b = serde_json::to_string(&run_pipeline(&g, &no_fallback(9)).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tiling_cover_mode() {
        let (_, g) = extremal_graph(24, 30).unwrap();
        let cfg = PipelineConfig {
            cover: CoverMode::Tiling,
            ..no_fallback(1)
        };
        let r = run_pipeline(&g, &cfg).unwrap();
        if let Some(cert) = &r.certificate {
            assert!(validate_certificate(&g, cert, Spanning::Required).valid);
        }
        assert!(r.cover.is_some());
    }

    #[test]
    fn connects_directed_paths_without_reservoir() {
        let g = OrientedGraph::transitive_tournament(12);
        let cover = greedy_path_cover(&g, &VertexSet::new(12), &PipelineConfig::default());
        assert_eq!(cover.paths.len(), 1);
    }
}
