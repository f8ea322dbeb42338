//! Absorbing structures at desk scale: connectors, strong and weak
//! absorbers, the absorbability classification, disjoint tuple selection,
//! the reservoir and the absorbing path.
//!
//! Adjacency is always taken in `U(G)` unless a directed connector mode is
//! requested. Thresholds are `alpha1 * n^2` strong absorbers and
//! `alpha2 * n^4` weak absorbers.

mod path;
mod reservoir;
mod select;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::OrientedGraph;

pub use path::{absorb_leftovers, build_absorbing_path, Absorption, AbsorbingPath, Gadget};
pub use reservoir::{build_reservoir, PairTally, Reservoir};
pub use select::{select_disjoint_tuples, select_disjoint_tuples_capped, DisjointSelection, PairHits, TupleFamilies};

/// Which two-step paths count as connectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectorMode {
    /// `w` adjacent to both ends in `U(G)`, either orientation.
    #[default]
    Underlying,
    /// `u -> w -> v` only.
    Directed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsorberConfig {
    /// Strong threshold, in strong absorbers per `n^2`.
    pub alpha1: f64,
    /// Weak threshold, in weak absorbers per `n^4`.
    pub alpha2: f64,
    /// Surplus in the degree condition `sigma2 >= (1 + eta) n`.
    pub eta: f64,
    /// Leftover budget `mu * n`; the absorbing path may use `8 sqrt(mu) n` vertices.
    pub mu: f64,
    /// Reservoir scale; the reservoir holds at most `tau * n / 64` vertices.
    pub tau: f64,
    pub connectors: ConnectorMode,
}

impl Default for AbsorberConfig {
    fn default() -> Self {
        Self {
            alpha1: 0.01,
            alpha2: 0.0001,
            eta: 0.1,
            mu: 0.002,
            tau: 0.9,
            connectors: ConnectorMode::Underlying,
        }
    }
}

impl AbsorberConfig {
    pub fn validate(&self) -> Result<(), AbsorberError> {
        let ordered = 0.0 < self.alpha2 && self.alpha2 < self.alpha1 && self.alpha1 < self.eta && self.eta < 1.0;
        if !ordered {
            return Err(AbsorberError::InvalidConfig(format!(
                "need 0 < alpha2 < alpha1 < eta < 1, got alpha2 = {}, alpha1 = {}, eta = {}",
                self.alpha2, self.alpha1, self.eta
            )));
        }
        for (name, value) in [("mu", self.mu), ("tau", self.tau)] {
            if !(value > 0.0 && value < 1.0) {
                return Err(AbsorberError::InvalidConfig(format!("{name} = {value} is outside (0, 1)")));
            }
        }
        Ok(())
    }

    pub fn strong_threshold(&self, n: usize) -> f64 {
        self.alpha1 * (n * n) as f64
    }

    pub fn weak_threshold(&self, n: usize) -> f64 {
        self.alpha2 * (n as f64).powi(4)
    }

    /// Vertex budget of the absorbing path, `floor(8 sqrt(mu) n)`.
    pub fn absorbing_budget(&self, n: usize) -> usize {
        (8.0 * self.mu.sqrt() * n as f64).floor() as usize
    }

    /// Leftover budget, `floor(mu n)`.
    pub fn leftover_budget(&self, n: usize) -> usize {
        (self.mu * n as f64).floor() as usize
    }

    /// Reservoir cap, `floor(tau n / 64)`.
    pub fn reservoir_cap(&self, n: usize) -> usize {
        (self.tau * n as f64 / 64.0).floor() as usize
    }

    /// `mu <= alpha2^2 / 1024`, the coupling used by the original argument.
    pub fn mu_coupled(&self) -> bool {
        self.mu <= self.alpha2 * self.alpha2 / 1024.0
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbsorberError {
    #[error("invalid absorber configuration: {0}")]
    InvalidConfig(String),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("tuple arity must be in 1..=4, got {0}")]
    BadArity(usize),
    #[error("tuple {tuple:?} for pair {pair:?} has arity {got}, expected {expected}")]
    ArityMismatch {
        pair: (usize, usize),
        tuple: Vec<usize>,
        expected: usize,
        got: usize,
    },
    #[error("non-adjacent pair ({u}, {v}) has no connector outside the excluded set")]
    ReservoirFailure { u: usize, v: usize },
    #[error("absorbing path has no gadgets to chain")]
    NoGadgets,
    #[error("chaining stalled at end vertex {end} with {remaining} gadget(s) unplaced")]
    ChainingStalled { end: usize, remaining: usize },
    #[error("leftover vertex {0} is already on the absorbing path")]
    LeftoverOnPath(usize),
    #[error("no available gadget absorbs vertex {0}")]
    NoGadgetFor(usize),
}

/// Vertices `w` outside `{u, v}` giving a `(u, v)`-path `u w v` of length 2.
pub fn connectors(g: &OrientedGraph, u: usize, v: usize, mode: ConnectorMode) -> VertexSet {
    let mut set = match mode {
        ConnectorMode::Underlying => g.neighbors(u).intersection(&g.neighbors(v)),
        ConnectorMode::Directed => g.out_neighbors(u).intersection(&g.in_neighbors(v)),
    };
    set.remove(u);
    set.remove(v);
    set
}

/// Precomputed `U(G)` neighbourhoods and lazily memoised strong counts.
pub(crate) struct Counter<'a> {
    g: &'a OrientedGraph,
    nbrs: Vec<VertexSet>,
    strong: Vec<u32>,
}

const UNKNOWN: u32 = u32::MAX;

impl<'a> Counter<'a> {
    pub(crate) fn new(g: &'a OrientedGraph) -> Self {
        Self {
            g,
            nbrs: g.underlying(),
            strong: vec![UNKNOWN; g.n() * g.n()],
        }
    }

    pub(crate) fn nbrs(&self, v: usize) -> &VertexSet {
        &self.nbrs[v]
    }

    fn compute_strong(&self, x: usize, y: usize) -> u64 {
        // ordered (a, b): a ~ x, b ~ y, a ~ b, a != y, b != x
        let mut ordered = 0u64;
        for a in self.nbrs[x].iter() {
            if a == y {
                continue;
            }
            let mut common = self.nbrs[a].intersection_len(&self.nbrs[y]) as u64;
            if self.nbrs[a].contains(x) && self.nbrs[y].contains(x) {
                common -= 1;
            }
            ordered += common;
        }
        // an unordered {a, b} is counted twice exactly when a, b ~ x and a, b ~ y
        let both = self.nbrs[x].intersection(&self.nbrs[y]);
        let inside: u64 = both.iter().map(|a| self.nbrs[a].intersection_len(&both) as u64).sum();
        ordered - inside / 2
    }

    /// Number of strong absorbers of `{x, y}`.
    pub(crate) fn strong(&mut self, x: usize, y: usize) -> u64 {
        let n = self.g.n();
        let slot = x * n + y;
        if self.strong[slot] == UNKNOWN {
            let value = self.compute_strong(x, y) as u32;
            self.strong[slot] = value;
            self.strong[y * n + x] = value;
        }
        u64::from(self.strong[slot])
    }

    /// `N(u) ∩ N(a')` minus the excluded vertices.
    fn side(&self, u: usize, inner: usize, excluded: &[usize]) -> VertexSet {
        let mut s = self.nbrs[u].intersection(&self.nbrs[inner]);
        for &x in excluded {
            s.remove(x);
        }
        s
    }

    /// Calls `f(a', b', A, B)` for every ordered strongly absorbable inner
    /// pair, where `A` and `B` are the candidate outer vertices.
    fn for_each_inner(&mut self, u: usize, v: usize, strong_min: f64, mut f: impl FnMut(usize, usize, &VertexSet, &VertexSet)) {
        let n = self.g.n();
        for ai in 0..n {
            if ai == u || ai == v || self.nbrs[ai].intersection_len(&self.nbrs[u]) == 0 {
                continue;
            }
            for bi in 0..n {
                if bi == ai || bi == u || bi == v {
                    continue;
                }
                if (self.strong(ai, bi) as f64) < strong_min {
                    continue;
                }
                let excluded = [u, v, ai, bi];
                let a_side = self.side(u, ai, &excluded);
                if a_side.is_empty() {
                    continue;
                }
                let b_side = self.side(v, bi, &excluded);
                f(ai, bi, &a_side, &b_side);
            }
        }
    }

    pub(crate) fn weak(&mut self, u: usize, v: usize, strong_min: f64, mode: WeakCountMode) -> u64 {
        let mut total = 0u64;
        match mode.resolve(self.g.n()) {
            WeakCountMode::Exact => self.for_each_inner(u, v, strong_min, |_, _, a_side, b_side| {
                for a in a_side.iter() {
                    for b in b_side.iter() {
                        if a != b {
                            total += 1;
                        }
                    }
                }
            }),
            _ => self.for_each_inner(u, v, strong_min, |_, _, a_side, b_side| {
                total += (a_side.len() * b_side.len() - a_side.intersection_len(b_side)) as u64;
            }),
        }
        total
    }

    /// Up to `limit` weak absorbers `(a, a', b', b)` of `{u, v}`, in
    /// enumeration order.
    pub(crate) fn weak_tuples(&mut self, u: usize, v: usize, strong_min: f64, limit: usize) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        self.for_each_inner(u, v, strong_min, |ai, bi, a_side, b_side| {
            for a in a_side.iter() {
                for b in b_side.iter() {
                    if out.len() < limit && a != b {
                        out.push([a, ai, bi, b]);
                    }
                }
            }
        });
        out
    }
}

/// How weak absorbers are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeakCountMode {
    /// Exact for `n <= WEAK_EXACT_MAX_N`, factorised above.
    #[default]
    Auto,
    /// Enumerates every `(a, a', b', b)`.
    Exact,
    /// For each inner pair, `|A| |B| - |A ∩ B|`.
    Factorized,
}

pub const WEAK_EXACT_MAX_N: usize = 60;

impl WeakCountMode {
    pub fn resolve(self, n: usize) -> Self {
        match self {
            WeakCountMode::Auto if n <= WEAK_EXACT_MAX_N => WeakCountMode::Exact,
            WeakCountMode::Auto => WeakCountMode::Factorized,
            other => other,
        }
    }
}

fn check_vertex(g: &OrientedGraph, v: usize) -> Result<(), AbsorberError> {
    if v >= g.n() {
        return Err(AbsorberError::VertexOutOfRange { vertex: v, n: g.n() });
    }
    Ok(())
}

/// Number of unordered `{a, b}` outside `{u, v}` with `a ~ b` and either
/// `a ~ u, b ~ v` or `a ~ v, b ~ u`. For `u == v` this is the number of edges
/// inside `N(u)`.
pub fn strong_absorbers(g: &OrientedGraph, u: usize, v: usize) -> Result<u64, AbsorberError> {
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    Ok(Counter::new(g).strong(u, v))
}

/// Every strong absorber of `{u, v}` as a sorted pair.
pub fn list_strong_absorbers(g: &OrientedGraph, u: usize, v: usize) -> Result<Vec<(usize, usize)>, AbsorberError> {
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    let (nu, nv) = (g.neighbors(u), g.neighbors(v));
    let mut out = Vec::new();
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            if [a, b].iter().any(|&x| x == u || x == v) || !g.adjacent(a, b) {
                continue;
            }
            if (nu.contains(a) && nv.contains(b)) || (nv.contains(a) && nu.contains(b)) {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

/// Weak absorbers counted as ordered tuples `(a, a', b', b)` of distinct
/// vertices outside `{u, v}` with `a ~ u`, `a ~ a'`, `b' ~ b`, `b ~ v` and
/// `{a', b'}` having at least `alpha1 n^2` strong absorbers.
pub fn weak_absorbers(
    g: &OrientedGraph,
    u: usize,
    v: usize,
    alpha1: f64,
    mode: WeakCountMode,
) -> Result<WeakCount, AbsorberError> {
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    let n = g.n();
    let count = Counter::new(g).weak(u, v, alpha1 * (n * n) as f64, mode);
    Ok(WeakCount {
        count,
        mode: mode.resolve(n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakCount {
    pub count: u64,
    /// The mode actually used.
    pub mode: WeakCountMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Absorbability {
    Strong,
    Weak,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexAbsorbability {
    pub vertex: usize,
    pub degree: usize,
    /// Degree at least `(1 + eta) n / 2`. Diagnostic only.
    pub good: bool,
    /// Strong absorbers of `{v, v}`.
    pub strong_pairs: u64,
    /// Weak absorbers of `{v, v}`; only counted when `v` is not strong.
    pub weak_tuples: Option<u64>,
    pub class: Absorbability,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbsorberReport {
    pub n: usize,
    pub sigma2: Option<usize>,
    /// `sigma2 >= (1 + eta) n`.
    pub meets_degree_condition: bool,
    pub config: AbsorberConfig,
    pub strong_threshold: f64,
    pub weak_threshold: f64,
    pub weak_mode: WeakCountMode,
    pub vertices: Vec<VertexAbsorbability>,
    pub strong: usize,
    pub weak: usize,
    pub neither: usize,
}

/// Classifies every vertex as strongly absorbable, weakly absorbable or
/// neither. "Neither" is reported as found.
pub fn classify_all(g: &OrientedGraph, config: &AbsorberConfig) -> Result<AbsorberReport, AbsorberError> {
    config.validate()?;
    let n = g.n();
    let sigma2 = g.sigma2().ok();
    let strong_min = config.strong_threshold(n);
    let weak_min = config.weak_threshold(n);
    let mode = WeakCountMode::Auto.resolve(n);
    let mut counter = Counter::new(g);
    let mut vertices = Vec::with_capacity(n);
    for v in 0..n {
        let strong_pairs = counter.strong(v, v);
        let (weak_tuples, class) = if strong_pairs as f64 >= strong_min {
            (None, Absorbability::Strong)
        } else {
            let w = counter.weak(v, v, strong_min, mode);
            (Some(w), if w as f64 >= weak_min { Absorbability::Weak } else { Absorbability::Neither })
        };
        let degree = g.degree(v);
        vertices.push(VertexAbsorbability {
            vertex: v,
            degree,
            good: degree as f64 >= (1.0 + config.eta) * n as f64 / 2.0,
            strong_pairs,
            weak_tuples,
            class,
        });
    }
    let tally = |c| vertices.iter().filter(|v| v.class == c).count();
    Ok(AbsorberReport {
        n,
        sigma2,
        meets_degree_condition: sigma2.is_some_and(|s| s as f64 >= (1.0 + config.eta) * n as f64),
        config: *config,
        strong_threshold: strong_min,
        weak_threshold: weak_min,
        weak_mode: mode,
        strong: tally(Absorbability::Strong),
        weak: tally(Absorbability::Weak),
        neither: tally(Absorbability::Neither),
        vertices,
    })
}
