//! Tournament tilings: predicted tile counts from `(n, sigma2)`, an explicit
//! search for vertex-disjoint cliques of `U(G)` realising a plan, and
//! Hamilton paths inside tournaments.
//!
//! Any orientation of a clique is a tournament, so a tile is just a vertex
//! set inducing a complete underlying graph.

use std::fmt;

use petgraph::algo::maximum_matching;
use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discrepancy::{Certificate, Method, PathCertificate};
use crate::extremal::{in_interval, RejectedOrder};
use crate::graph::OrientedGraph;

/// Largest `n` for the clique backtracking (`r >= 3`).
pub const TILING_MAX_N: usize = 30;

/// Default node limit for [`find_tiling`].
pub const DEFAULT_NODE_LIMIT: u64 = 20_000_000;

/// `b_r` tiles on `r` vertices and `b_bar_r` tiles on `r - 1` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingPlan {
    pub n: usize,
    pub sigma2: usize,
    pub r: usize,
    pub b_r: usize,
    pub b_bar_r: usize,
}

impl TilingPlan {
    /// `r * b_r + (r - 1) * b_bar_r == n`
    pub fn covers(&self) -> bool {
        self.r * self.b_r + (self.r - 1) * self.b_bar_r == self.n
    }

    pub fn tile_count(&self) -> usize {
        self.b_r + self.b_bar_r
    }
}

impl fmt::Display for TilingPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r={} b_r={} b_bar_r={} ({}*{} + {}*{} = {})",
            self.r,
            self.b_r,
            self.b_bar_r,
            self.r,
            self.b_r,
            self.r - 1,
            self.b_bar_r,
            self.n
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingError {
    #[error("n = {0} is below the minimum of 2")]
    TooFewVertices(usize),
    #[error("sigma2 = {sigma2} is outside [0, {max}]")]
    Sigma2OutOfDomain { sigma2: usize, max: usize },
    #[error("no tiling order for n = {n}, sigma2 = {sigma2}: {}", rejected.iter().map(|r| format!("r={}: {}", r.r, r.reason)).collect::<Vec<_>>().join("; "))]
    OutOfRange {
        n: usize,
        sigma2: usize,
        rejected: Vec<RejectedOrder>,
    },
    #[error("plan is for n = {plan} but the graph has {graph} vertices")]
    PlanSizeMismatch { plan: usize, graph: usize },
    #[error("plan {0} does not cover its vertex count")]
    InconsistentPlan(TilingPlan),
    #[error("tiling search limited to n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("graph is not a tournament ({missing} non-adjacent pairs)")]
    NotATournament { missing: usize },
}

/// Smallest `r >= 2` whose interval contains `sigma2` and whose counts are
/// non-negative integers.
pub fn tiling_plan(n: usize, sigma2: usize) -> Result<TilingPlan, TilingError> {
    if n < 2 {
        return Err(TilingError::TooFewVertices(n));
    }
    let max = 2 * (n - 1);
    if sigma2 > max {
        return Err(TilingError::Sigma2OutOfDomain { sigma2, max });
    }
    let mut rejected = Vec::new();
    for r in 2..=n {
        if !in_interval(n, sigma2, r) {
            continue;
        }
        // 2 b_r = (r-1) sigma2 - 2(r-2) n, 2 b_bar_r = 2(r-1) n - r sigma2
        let twice_b = (r - 1) * sigma2 - 2 * (r - 2) * n;
        let twice_b_bar = 2 * (r - 1) * n - r * sigma2;
        if twice_b % 2 != 0 || twice_b_bar % 2 != 0 {
            rejected.push(RejectedOrder {
                r,
                reason: format!("b_r = {twice_b}/2, b_bar_r = {twice_b_bar}/2 not both integral"),
            });
            continue;
        }
        let plan = TilingPlan {
            n,
            sigma2,
            r,
            b_r: twice_b / 2,
            b_bar_r: twice_b_bar / 2,
        };
        if !plan.covers() {
            return Err(TilingError::InconsistentPlan(plan));
        }
        return Ok(plan);
    }
    if rejected.is_empty() {
        rejected.push(RejectedOrder {
            r: 0,
            reason: "no r >= 2 has sigma2 inside its interval".into(),
        });
    }
    Err(TilingError::OutOfRange { n, sigma2, rejected })
}

/// Vertex-disjoint tiles, each inducing a complete underlying graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingCertificate {
    pub r: usize,
    /// Sorted vertex lists; tiles of size `r` come first.
    pub tiles: Vec<Vec<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TilingViolation {
    #[error("vertex {0} is out of range or appears twice")]
    Overlap(usize),
    #[error("vertex {0} is not covered")]
    Uncovered(usize),
    #[error("tile {tile} has {size} vertices, expected {expected}")]
    WrongSize { tile: usize, size: usize, expected: usize },
    #[error("tile {tile} misses the pair {u} {v}")]
    NotAClique { tile: usize, u: usize, v: usize },
}

impl TilingCertificate {
    pub fn validate(&self, g: &OrientedGraph, plan: &TilingPlan) -> Result<(), TilingViolation> {
        let mut seen = vec![false; g.n()];
        for (i, tile) in self.tiles.iter().enumerate() {
            let expected = if i < plan.b_r { plan.r } else { plan.r - 1 };
            if tile.len() != expected || self.tiles.len() != plan.tile_count() {
                return Err(TilingViolation::WrongSize {
                    tile: i,
                    size: tile.len(),
                    expected,
                });
            }
            for (a, &u) in tile.iter().enumerate() {
                if u >= g.n() || std::mem::replace(&mut seen[u], true) {
                    return Err(TilingViolation::Overlap(u));
                }
                if let Some(&v) = tile[a + 1..].iter().find(|&&v| !g.adjacent(u, v)) {
                    return Err(TilingViolation::NotAClique { tile: i, u, v });
                }
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(v) => Err(TilingViolation::Uncovered(v)),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TilingSearch {
    Found(TilingCertificate),
    /// `exhausted` is false when the node limit stopped the search.
    NotFound { nodes: u64, exhausted: bool },
}

struct CliqueSearch {
    adj: Vec<u64>,
    nodes: u64,
    limit: u64,
    tiles: Vec<Vec<usize>>,
}

impl CliqueSearch {
    fn min_tile(&self, big: usize, small: usize, r: usize) -> usize {
        if small > 0 {
            r - 1
        } else if big > 0 {
            r
        } else {
            0
        }
    }

    fn cover(&mut self, uncovered: u64, big: usize, small: usize, r: usize) -> bool {
        if uncovered == 0 {
            return true;
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            return false;
        }
        let need = self.min_tile(big, small, r).max(1) - 1;
        // fail-first: the uncovered vertex with the fewest uncovered neighbours
        let mut pivot = None;
        let mut rest = uncovered;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (self.adj[v] & uncovered).count_ones() as usize;
            if d < need {
                return false;
            }
            if pivot.is_none_or(|(_, best)| d < best) {
                pivot = Some((v, d));
            }
        }
        let (v, _) = pivot.unwrap();
        for (size, is_big) in [(r, true), (r - 1, false)] {
            let left = if is_big { big } else { small };
            if left == 0 {
                continue;
            }
            let (nb, ns) = if is_big { (big - 1, small) } else { (big, small - 1) };
            let mut tile = vec![v];
            if self.extend(&mut tile, self.adj[v] & uncovered, size, uncovered, nb, ns, r) {
                return true;
            }
            if self.nodes > self.limit {
                return false;
            }
        }
        false
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &mut self,
        tile: &mut Vec<usize>,
        candidates: u64,
        size: usize,
        uncovered: u64,
        big: usize,
        small: usize,
        r: usize,
    ) -> bool {
        if tile.len() == size {
            let mask = tile.iter().fold(0u64, |m, &v| m | 1 << v);
            self.tiles.push(tile.clone());
            if self.cover(uncovered & !mask, big, small, r) {
                return true;
            }
            self.tiles.pop();
            return false;
        }
        if (candidates.count_ones() as usize) < size - tile.len() {
            return false;
        }
        let mut rest = candidates;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            tile.push(w);
            // later candidates only, so each clique is built once
            let found = self.extend(tile, rest & self.adj[w], size, uncovered, big, small, r);
            tile.pop();
            if found {
                return true;
            }
            if self.nodes > self.limit {
                return false;
            }
        }
        false
    }
}

fn matching_tiling(g: &OrientedGraph, plan: &TilingPlan) -> TilingSearch {
    let mut ug = UnGraph::<(), ()>::with_capacity(g.n(), g.edge_count());
    let nodes: Vec<_> = (0..g.n()).map(|_| ug.add_node(())).collect();
    for (u, v) in g.edges() {
        ug.add_edge(nodes[u], nodes[v], ());
    }
    let matching = maximum_matching(&ug);
    let mut pairs: Vec<Vec<usize>> = matching
        .edges()
        .map(|(a, b)| {
            let (a, b) = (a.index(), b.index());
            vec![a.min(b), a.max(b)]
        })
        .collect();
    pairs.sort_unstable();
    if pairs.len() < plan.b_r {
        return TilingSearch::NotFound {
            nodes: 0,
            exhausted: true,
        };
    }
    pairs.truncate(plan.b_r);
    let mut covered = vec![false; g.n()];
    for p in &pairs {
        covered[p[0]] = true;
        covered[p[1]] = true;
    }
    pairs.extend((0..g.n()).filter(|&v| !covered[v]).map(|v| vec![v]));
    TilingSearch::Found(TilingCertificate { r: 2, tiles: pairs })
}

/// Searches for a tiling realising `plan`, validating any certificate found.
///
/// Plans with `r = 2` are solved by maximum matching on `U(G)` at any `n`.
/// Larger `r` uses clique backtracking and needs `n <= TILING_MAX_N`.
pub fn find_tiling(g: &OrientedGraph, plan: &TilingPlan, node_limit: u64) -> Result<TilingSearch, TilingError> {
    let n = g.n();
    if plan.n != n {
        return Err(TilingError::PlanSizeMismatch { plan: plan.n, graph: n });
    }
    if plan.r < 2 || !plan.covers() {
        return Err(TilingError::InconsistentPlan(*plan));
    }
    let result = if plan.r == 2 {
        matching_tiling(g, plan)
    } else {
        if n > TILING_MAX_N {
            return Err(TilingError::TooLarge { n, max: TILING_MAX_N });
        }
        let adj = (0..n)
            .map(|u| g.neighbors(u).iter().fold(0u64, |m, v| m | 1 << v))
            .collect();
        let mut search = CliqueSearch {
            adj,
            nodes: 0,
            limit: node_limit,
            tiles: Vec::new(),
        };
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if search.cover(all, plan.b_r, plan.b_bar_r, plan.r) {
            let mut tiles = search.tiles;
            for t in &mut tiles {
                t.sort_unstable();
            }
            // big tiles first, each group in order of smallest vertex
            tiles.sort_by_key(|t| (std::cmp::Reverse(t.len()), t[0]));
            TilingSearch::Found(TilingCertificate { r: plan.r, tiles })
        } else {
            TilingSearch::NotFound {
                nodes: search.nodes,
                exhausted: search.nodes <= search.limit,
            }
        }
    };
    if let TilingSearch::Found(cert) = &result {
        cert.validate(g, plan)
            .expect("search only emits disjoint cliques of the planned sizes");
    }
    Ok(result)
}

/// Directed Hamilton path of a tournament by insertion.
pub fn tournament_hamilton_path(t: &OrientedGraph) -> Result<PathCertificate, TilingError> {
    let n = t.n();
    if !t.is_tournament() {
        return Err(TilingError::NotATournament {
            missing: n * n.saturating_sub(1) / 2 - t.edge_count(),
        });
    }
    let mut path: Vec<usize> = Vec::with_capacity(n);
    for v in 0..n {
        if path.is_empty() || t.has_edge(v, path[0]) {
            path.insert(0, v);
        } else if t.has_edge(path[path.len() - 1], v) {
            path.push(v);
        } else {
            // path[0] -> v and v -> last, so some consecutive pair switches
            let i = (0..path.len() - 1)
                .find(|&i| t.has_edge(path[i], v) && t.has_edge(v, path[i + 1]))
                .expect("a switch point exists in a tournament");
            path.insert(i + 1, v);
        }
    }
    Ok(Certificate::path(t, path, Method::Construction).expect("every step is an edge"))
}

/// A tile turned into a cycle: its directed Hamilton path closed by the edge
/// between the ends. Needs at least 3 vertices forming a clique.
pub fn tile_cycle(g: &OrientedGraph, tile: &[usize]) -> Result<Certificate, TilingError> {
    let path = tile_path(g, tile)?;
    Certificate::cycle(g, path.cycle, Method::Construction, false)
        .map_err(|_| TilingError::TooFewVertices(tile.len()))
}

/// Directed Hamilton path through a clique tile, in original labels.
pub fn tile_path(g: &OrientedGraph, tile: &[usize]) -> Result<PathCertificate, TilingError> {
    let sub = g.induced(tile);
    let local = tournament_hamilton_path(&sub)?;
    let seq = local.cycle.iter().map(|&i| tile[i]).collect();
    Ok(Certificate::path(g, seq, Method::Construction).expect("tile is a clique"))
}
