//! Oriented graphs: directed graphs with no loops and at most one edge per
//! vertex pair.
//!
//! Adjacency is stored as two packed bit matrices (out- and in-neighbours).
//! The underlying undirected graph `U(G)` is never stored; it is derived
//! from those two on demand, either per query ([`OrientedGraph::adjacent`])
//! or as an owned snapshot ([`OrientedGraph::underlying`]) for hot loops.

mod enumerate;
mod generate;
mod text;

pub use enumerate::{enumerate_oriented_graphs, GraphEnumeration, MAX_ENUMERATION_N};
pub use generate::{random_oriented, random_tournament, sample_with_sigma2, SampledGraph, SamplingFailure};
pub use text::{parse_graph, serialize_graph};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::{words_for, VertexSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("loop at vertex {0} is not allowed")]
    Loop(usize),
    #[error("pair ({u}, {v}) is already joined by the edge {existing_from}->{existing_to}")]
    OrientationConflict {
        u: usize,
        v: usize,
        existing_from: usize,
        existing_to: usize,
    },
    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("sigma2 is undefined for graphs on fewer than 2 vertices (n = {0})")]
    TooFewVertices(usize),
    #[error("composition needs one part per vertex of the outer graph: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("n = {n} exceeds the supported maximum of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("edge probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// An oriented graph on the vertex set `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrientedGraph {
    n: usize,
    words: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
}

/// Summary degree statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub sigma2: usize,
    pub min_total_degree: usize,
    pub is_tournament: bool,
}

impl OrientedGraph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Self {
            n,
            words,
            out: vec![0; n * words],
            inn: vec![0; n * words],
        }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn directed_cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n).expect("cycle edges are distinct pairs for n >= 3");
        }
        g
    }

    /// Transitive tournament with `i -> j` exactly when `i < j`.
    pub fn transitive_tournament(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.insert_unchecked(i, j);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn bit(row: &[u64], v: usize) -> bool {
        row[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn out_row(&self, u: usize) -> &[u64] {
        &self.out[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub(crate) fn in_row(&self, u: usize) -> &[u64] {
        &self.inn[u * self.words..(u + 1) * self.words]
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    pub(crate) fn insert_unchecked(&mut self, u: usize, v: usize) {
        let w = self.words;
        self.out[u * w + v / 64] |= 1 << (v % 64);
        self.inn[v * w + u / 64] |= 1 << (u % 64);
    }

    /// Adds the edge `u -> v`, rejecting loops and pairs that are already joined.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::Loop(u));
        }
        if self.has_edge(u, v) || self.has_edge(v, u) {
            let (existing_from, existing_to) = if self.has_edge(u, v) { (u, v) } else { (v, u) };
            return Err(GraphError::OrientationConflict {
                u,
                v,
                existing_from,
                existing_to,
            });
        }
        self.insert_unchecked(u, v);
        Ok(())
    }

    /// Removes whichever edge joins `u` and `v`, if any. Returns whether one existed.
    pub fn remove_pair(&mut self, u: usize, v: usize) -> bool {
        let w = self.words;
        let mut removed = false;
        for (a, b) in [(u, v), (v, u)] {
            if a < self.n && b < self.n && self.has_edge(a, b) {
                self.out[a * w + b / 64] &= !(1 << (b % 64));
                self.inn[b * w + a / 64] &= !(1 << (a % 64));
                removed = true;
            }
        }
        removed
    }

    /// True iff the directed edge `u -> v` is present.
    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && Self::bit(self.out_row(u), v)
    }

    /// True iff `u` and `v` are joined in either direction.
    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v) || self.has_edge(v, u)
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.in_row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Total degree `d(u) = d+(u) + d-(u)`, the degree of `u` in `U(G)`.
    pub fn degree(&self, u: usize) -> usize {
        self.out_row(u)
            .iter()
            .zip(self.in_row(u))
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn out_neighbors(&self, u: usize) -> VertexSet {
        VertexSet::from_words(self.out_row(u), self.n)
    }

    pub fn in_neighbors(&self, u: usize) -> VertexSet {
        VertexSet::from_words(self.in_row(u), self.n)
    }

    /// Neighbourhood of `u` in `U(G)`.
    pub fn neighbors(&self, u: usize) -> VertexSet {
        let mut set = self.out_neighbors(u);
        set.union_with(&self.in_neighbors(u));
        set
    }

    /// Snapshot of `U(G)` as one neighbourhood set per vertex.
    pub fn underlying(&self) -> Vec<VertexSet> {
        (0..self.n).map(|u| self.neighbors(u)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// All edges sorted by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out_neighbors(u).iter().map(move |v| (u, v)).collect::<Vec<_>>())
    }

    /// True iff every pair of distinct vertices is joined.
    pub fn is_tournament(&self) -> bool {
        let pairs = self.n * self.n.saturating_sub(1) / 2;
        self.edge_count() == pairs
    }

    /// Ore parameter: the minimum of `d(x) + d(y)` over non-adjacent pairs,
    /// and `2(n - 1)` when there is no such pair.
    pub fn sigma2(&self) -> Result<usize, GraphError> {
        Ok(self.stats()?.sigma2)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).min().unwrap_or(0)
    }

    pub fn stats(&self) -> Result<GraphStats, GraphError> {
        if self.n < 2 {
            return Err(GraphError::TooFewVertices(self.n));
        }
        let degrees: Vec<usize> = (0..self.n).map(|u| self.degree(u)).collect();
        let mut sigma2: Option<usize> = None;
        for x in 0..self.n {
            for y in x + 1..self.n {
                if !self.adjacent(x, y) {
                    let s = degrees[x] + degrees[y];
                    sigma2 = Some(sigma2.map_or(s, |m| m.min(s)));
                }
            }
        }
        Ok(GraphStats {
            sigma2: sigma2.unwrap_or(2 * (self.n - 1)),
            min_total_degree: degrees.iter().copied().min().unwrap_or(0),
            is_tournament: sigma2.is_none(),
        })
    }

    /// True iff `U(G)` is connected (vacuously for `n <= 1`).
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = VertexSet::new(self.n);
        let mut stack = vec![0];
        seen.insert(0);
        while let Some(u) = stack.pop() {
            for w in self.neighbors(u).iter() {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == self.n
    }

    /// Induced subgraph on `vertices`, relabelled `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> OrientedGraph {
        let mut g = OrientedGraph::empty(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate() {
                if self.has_edge(a, b) {
                    g.insert_unchecked(i, j);
                }
            }
        }
        g
    }
}

impl std::fmt::Debug for OrientedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OrientedGraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// The composition `D[G_1, ..., G_k]`: each vertex `i` of `outer` is replaced by
/// `parts[i]`, and every outer edge `i -> j` becomes a complete one-way join
/// from part `i` to part `j`. Part `i` occupies a consecutive index block, in
/// part order.
pub fn compose(outer: &OrientedGraph, parts: &[OrientedGraph]) -> Result<OrientedGraph, GraphError> {
    if parts.len() != outer.n() {
        return Err(GraphError::ArityMismatch {
            expected: outer.n(),
            got: parts.len(),
        });
    }
    let mut offsets = Vec::with_capacity(parts.len() + 1);
    offsets.push(0);
    for p in parts {
        offsets.push(offsets.last().unwrap() + p.n());
    }
    let total = *offsets.last().unwrap();
    let mut g = OrientedGraph::empty(total);
    for (i, p) in parts.iter().enumerate() {
        for (u, v) in p.edges() {
            g.insert_unchecked(offsets[i] + u, offsets[i] + v);
        }
    }
    for (i, j) in outer.edges() {
        for x in offsets[i]..offsets[i + 1] {
            for y in offsets[j]..offsets[j + 1] {
                g.insert_unchecked(x, y);
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_edge_rules() {
        let mut g = OrientedGraph::empty(2);
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(matches!(g.add_edge(1, 0), Err(GraphError::OrientationConflict { u: 1, v: 0, .. })));
        assert!(matches!(g.add_edge(0, 1), Err(GraphError::OrientationConflict { .. })));
        assert_eq!(g.add_edge(0, 0), Err(GraphError::Loop(0)));
        assert!(matches!(g.add_edge(0, 2), Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })));
    }

    #[test]
    fn sigma2_examples() {
        assert_eq!(OrientedGraph::directed_cycle(3).sigma2().unwrap(), 4);
        assert_eq!(OrientedGraph::empty(3).sigma2().unwrap(), 0);
        assert_eq!(OrientedGraph::empty(1).sigma2(), Err(GraphError::TooFewVertices(1)));
        let stats = OrientedGraph::transitive_tournament(5).stats().unwrap();
        assert!(stats.is_tournament);
        assert_eq!(stats.sigma2, 8);
        assert_eq!(stats.min_total_degree, 4);
    }

    #[test]
    fn sigma2_ignores_adjacent_low_degree_pairs() {
        // path 0-1-2: only non-adjacent pair is {0, 2} with degrees 1 + 1
        let g = OrientedGraph::from_edges(3, [(0, 1), (2, 1)]).unwrap();
        assert_eq!(g.sigma2().unwrap(), 2);
        assert_eq!(g.min_degree(), 1);
    }

    #[test]
    fn compose_examples() {
        let single = OrientedGraph::from_edges(2, [(0, 1)]).unwrap();
        let g = compose(&single, &[OrientedGraph::empty(1), OrientedGraph::empty(2)]).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2)]);

        let edge = OrientedGraph::from_edges(2, [(0, 1)]).unwrap();
        let g = compose(&OrientedGraph::empty(2), &[edge.clone(), edge]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (2, 3)]);

        let parts = [2, 5, 5].map(OrientedGraph::empty);
        let g = compose(&OrientedGraph::transitive_tournament(3), &parts).unwrap();
        assert_eq!(g.n(), 12);
        assert_eq!(g.edge_count(), 45);

        assert_eq!(
            compose(&single, &[OrientedGraph::empty(1)]),
            Err(GraphError::ArityMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn induced_relabels() {
        let g = OrientedGraph::directed_cycle(5);
        let h = g.induced(&[3, 4, 0]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn connectivity() {
        assert!(OrientedGraph::directed_cycle(6).is_connected());
        assert!(!OrientedGraph::empty(2).is_connected());
    }
}
