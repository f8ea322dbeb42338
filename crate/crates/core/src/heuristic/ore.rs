//! Constructive Hamilton cycles on `U(G)` by path extension and rotation.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::discrepancy::{Certificate, Method};
use crate::graph::OrientedGraph;
use crate::rng::Rng;

/// Why the construction stopped without a Hamilton cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum OreFailure {
    TooFewVertices { n: usize },
    /// A maximal path could not be closed: its ends are non-adjacent and no
    /// crossing pair exists. Cannot happen when `sigma2 >= n`.
    ClosureStalled { path_len: usize },
    /// A cycle has no neighbour outside it, so `U(G)` is disconnected.
    Disconnected { covered: usize },
}

fn pick(candidates: &VertexSet, rng: &mut Option<&mut Rng>) -> Option<usize> {
    match rng {
        None => candidates.first(),
        Some(rng) => {
            let all: Vec<usize> = candidates.iter().collect();
            all.choose(rng).copied()
        }
    }
}

/// Grows `path` at both ends until neither end has a neighbour off the path,
/// preferring steps that keep the edge aligned with the traversal.
fn extend(
    g: &OrientedGraph,
    nbrs: &[VertexSet],
    path: &mut VecDeque<usize>,
    on_path: &mut VertexSet,
    rng: &mut Option<&mut Rng>,
) {
    loop {
        let mut grew = false;
        let back = *path.back().unwrap();
        let mut free = nbrs[back].clone();
        free.difference_with(on_path);
        if !free.is_empty() {
            let aligned = free.intersection(&g.out_neighbors(back));
            let next = pick(if aligned.is_empty() { &free } else { &aligned }, rng).unwrap();
            path.push_back(next);
            on_path.insert(next);
            grew = true;
        }
        let front = *path.front().unwrap();
        let mut free = nbrs[front].clone();
        free.difference_with(on_path);
        if !free.is_empty() {
            let aligned = free.intersection(&g.in_neighbors(front));
            let prev = pick(if aligned.is_empty() { &free } else { &aligned }, rng).unwrap();
            path.push_front(prev);
            on_path.insert(prev);
            grew = true;
        }
        if !grew {
            return;
        }
    }
}

/// Turns a maximal path into a cycle on the same vertices, using the ends'
/// adjacency or a crossing pair `p0 ~ p[i+1]`, `p[i] ~ p_last`.
fn close(g: &OrientedGraph, path: &VecDeque<usize>) -> Option<Vec<usize>> {
    let len = path.len();
    if len < 3 {
        return None;
    }
    let (first, last) = (path[0], path[len - 1]);
    if g.adjacent(first, last) {
        return Some(path.iter().copied().collect());
    }
    let i = (1..len - 2).find(|&i| g.adjacent(first, path[i + 1]) && g.adjacent(path[i], last))?;
    let mut cycle: Vec<usize> = path.range(..=i).copied().collect();
    cycle.extend(path.range(i + 1..).rev());
    Some(cycle)
}

/// A Hamilton cycle of `U(G)` starting the construction from `start`. With
/// `rng`, extension choices are randomised.
pub fn ore_cycle(g: &OrientedGraph, start: usize, mut rng: Option<&mut Rng>) -> Result<Vec<usize>, OreFailure> {
    let n = g.n();
    if n < 3 {
        return Err(OreFailure::TooFewVertices { n });
    }
    let nbrs = g.underlying();
    let mut path = VecDeque::from([start]);
    let mut on_path = VertexSet::new(n);
    on_path.insert(start);
    loop {
        extend(g, &nbrs, &mut path, &mut on_path, &mut rng);
        let cycle = close(g, &path).ok_or(OreFailure::ClosureStalled { path_len: path.len() })?;
        if cycle.len() == n {
            return Ok(cycle);
        }
        // open the cycle at a vertex with a neighbour outside it
        let (j, outside) = cycle
            .iter()
            .enumerate()
            .find_map(|(j, &c)| {
                let mut free = nbrs[c].clone();
                free.difference_with(&on_path);
                free.first().map(|w| (j, w))
            })
            .ok_or(OreFailure::Disconnected { covered: cycle.len() })?;
        path.clear();
        path.push_back(outside);
        for k in 0..cycle.len() {
            path.push_back(cycle[(j + k) % cycle.len()]);
        }
        on_path.insert(outside);
    }
}

/// Deterministic Hamilton cycle from vertex 0, as an unoptimised certificate.
pub fn ore_hamilton(g: &OrientedGraph) -> Result<Certificate, OreFailure> {
    let cycle = ore_cycle(g, 0, None)?;
    Ok(Certificate::cycle(g, cycle, Method::Heuristic, false).expect("construction only uses graph edges"))
}
