//! Direction accounting for oriented cycles and paths.
//!
//! Traversing a cycle or path `v_0, v_1, ...` in an oriented graph, each
//! consecutive pair is joined by exactly one edge. The edge is *aligned* when
//! it points along the traversal (`v_i -> v_{i+1}`) and *opposed* otherwise.
//! `sigma_plus` and `sigma_minus` count the two kinds; `sigma_max` is the
//! larger, the number of edges in the dominant direction.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::OrientedGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("vertex {vertex} at position {position} is out of range for n = {n}")]
    VertexOutOfRange { position: usize, vertex: usize, n: usize },
    #[error("vertex {vertex} repeats at position {position}")]
    RepeatedVertex { position: usize, vertex: usize },
    #[error("positions {position} and {next}: vertices {u} and {v} are not adjacent")]
    NotAdjacent {
        position: usize,
        next: usize,
        u: usize,
        v: usize,
    },
    #[error("a cycle needs at least 3 vertices, got {0}")]
    CycleTooShort(usize),
}

/// Provenance of a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactDp,
    ExactBb,
    Heuristic,
    Pipeline,
    /// Built directly, e.g. a tournament Hamilton path by insertion.
    Construction,
    External,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ExactDp => "exact-dp",
            Method::ExactBb => "exact-bb",
            Method::Heuristic => "heuristic",
            Method::Pipeline => "pipeline",
            Method::Construction => "construction",
            Method::External => "external",
        })
    }
}

/// A traversed cycle (`cyclic = true`) or path with its direction counts.
///
/// The serialised field order is fixed: `n, cycle, cyclic, sigma_plus,
/// sigma_minus, sigma_max, optimal, method`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub cycle: Vec<usize>,
    pub cyclic: bool,
    pub sigma_plus: usize,
    pub sigma_minus: usize,
    pub sigma_max: usize,
    pub optimal: bool,
    pub method: Method,
}

pub type CycleCertificate = Certificate;
pub type PathCertificate = Certificate;

/// Counts aligned and opposed edges along `seq`, including the wrap-around
/// pair when `cyclic`.
pub fn sigma_counts(g: &OrientedGraph, seq: &[usize], cyclic: bool) -> Result<(usize, usize), WalkError> {
    if cyclic && seq.len() < 3 {
        return Err(WalkError::CycleTooShort(seq.len()));
    }
    let mut seen = VertexSet::new(g.n());
    for (position, &vertex) in seq.iter().enumerate() {
        if vertex >= g.n() {
            return Err(WalkError::VertexOutOfRange {
                position,
                vertex,
                n: g.n(),
            });
        }
        if !seen.insert(vertex) {
            return Err(WalkError::RepeatedVertex { position, vertex });
        }
    }
    let steps = if cyclic { seq.len() } else { seq.len().saturating_sub(1) };
    let (mut plus, mut minus) = (0, 0);
    for position in 0..steps {
        let next = (position + 1) % seq.len();
        let (u, v) = (seq[position], seq[next]);
        if g.has_edge(u, v) {
            plus += 1;
        } else if g.has_edge(v, u) {
            minus += 1;
        } else {
            return Err(WalkError::NotAdjacent { position, next, u, v });
        }
    }
    Ok((plus, minus))
}

/// Aligned-edge indicator for the step `u -> v`.
#[inline]
pub(crate) fn aligned(g: &OrientedGraph, u: usize, v: usize) -> usize {
    usize::from(g.has_edge(u, v))
}

impl Certificate {
    /// Certificate for `seq` exactly as traversed (no canonicalisation).
    pub fn from_sequence(
        g: &OrientedGraph,
        seq: Vec<usize>,
        cyclic: bool,
        method: Method,
        optimal: bool,
    ) -> Result<Self, WalkError> {
        let (sigma_plus, sigma_minus) = sigma_counts(g, &seq, cyclic)?;
        Ok(Self {
            n: g.n(),
            cycle: seq,
            cyclic,
            sigma_plus,
            sigma_minus,
            sigma_max: sigma_plus.max(sigma_minus),
            optimal,
            method,
        })
    }

    /// Canonical cycle certificate.
    pub fn cycle(g: &OrientedGraph, seq: Vec<usize>, method: Method, optimal: bool) -> Result<Self, WalkError> {
        Ok(Self::from_sequence(g, seq, true, method, optimal)?.canonical())
    }

    /// Canonical path certificate.
    pub fn path(g: &OrientedGraph, seq: Vec<usize>, method: Method) -> Result<Self, WalkError> {
        Ok(Self::from_sequence(g, seq, false, method, false)?.canonical())
    }

    pub fn sigma_min(&self) -> usize {
        self.sigma_plus.min(self.sigma_minus)
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    /// First and last vertex of a path (or of the stored cycle rotation).
    pub fn endpoints(&self) -> Option<(usize, usize)> {
        Some((*self.cycle.first()?, *self.cycle.last()?))
    }

    /// The same walk traversed backwards; counts swap.
    pub fn reversed(&self) -> Self {
        let mut cycle = self.cycle.clone();
        if self.cyclic && !cycle.is_empty() {
            // keep the starting vertex so only the direction changes
            cycle[1..].reverse();
        } else {
            cycle.reverse();
        }
        Self {
            cycle,
            sigma_plus: self.sigma_minus,
            sigma_minus: self.sigma_plus,
            ..self.clone()
        }
    }

    /// Canonical form. Cycles start at their smallest vertex and are traversed
    /// so that `sigma_plus >= sigma_minus`, ties going to the smaller second
    /// vertex. Paths are traversed so that `sigma_plus >= sigma_minus`, ties
    /// going to the lexicographically smaller sequence.
    pub fn canonical(&self) -> Self {
        if self.cycle.is_empty() {
            return self.clone();
        }
        let mut forward = self.clone();
        if self.cyclic {
            let start = forward
                .cycle
                .iter()
                .enumerate()
                .min_by_key(|(_, &v)| v)
                .map(|(i, _)| i)
                .unwrap();
            forward.cycle.rotate_left(start);
        }
        let backward = forward.reversed();
        let keep_forward = match forward.sigma_plus.cmp(&forward.sigma_minus) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => forward.cycle <= backward.cycle,
        };
        if keep_forward {
            forward
        } else {
            backward
        }
    }
}

/// One reason a certificate fails validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    VertexCountMismatch { certificate: usize, graph: usize },
    InvalidWalk { detail: String },
    NotSpanning { missing: usize },
    CountMismatch { stored: (usize, usize), actual: (usize, usize) },
    SigmaMaxMismatch { stored: usize, actual: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexCountMismatch { certificate, graph } => {
                write!(f, "vertex count mismatch: certificate says {certificate}, graph has {graph}")
            }
            Violation::InvalidWalk { detail } => write!(f, "invalid walk: {detail}"),
            Violation::NotSpanning { missing } => write!(f, "not spanning: {missing} vertices missing"),
            Violation::CountMismatch { stored, actual } => write!(
                f,
                "count mismatch: stored (+{}, -{}), recomputed (+{}, -{})",
                stored.0, stored.1, actual.0, actual.1
            ),
            Violation::SigmaMaxMismatch { stored, actual } => {
                write!(f, "sigma_max mismatch: stored {stored}, recomputed {actual}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Whether a certificate must visit every vertex of the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spanning {
    Required,
    NotRequired,
}

/// Recomputes everything a certificate claims and lists what does not hold.
pub fn validate_certificate(g: &OrientedGraph, cert: &Certificate, spanning: Spanning) -> Validation {
    let mut violations = Vec::new();
    if cert.n != g.n() {
        violations.push(Violation::VertexCountMismatch {
            certificate: cert.n,
            graph: g.n(),
        });
    }
    match sigma_counts(g, &cert.cycle, cert.cyclic) {
        Ok(actual) => {
            if spanning == Spanning::Required && cert.cycle.len() != g.n() {
                violations.push(Violation::NotSpanning {
                    missing: g.n().saturating_sub(cert.cycle.len()),
                });
            }
            if actual != (cert.sigma_plus, cert.sigma_minus) {
                violations.push(Violation::CountMismatch {
                    stored: (cert.sigma_plus, cert.sigma_minus),
                    actual,
                });
            }
            if cert.sigma_max != actual.0.max(actual.1) {
                violations.push(Violation::SigmaMaxMismatch {
                    stored: cert.sigma_max,
                    actual: actual.0.max(actual.1),
                });
            }
        }
        Err(e) => violations.push(Violation::InvalidWalk { detail: e.to_string() }),
    }
    Validation {
        valid: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn count_examples() {
        let c3 = OrientedGraph::directed_cycle(3);
        assert_eq!(sigma_counts(&c3, &[0, 1, 2], true).unwrap(), (3, 0));
        assert_eq!(sigma_counts(&c3, &[2, 1, 0], true).unwrap(), (0, 3));
        let t4 = OrientedGraph::transitive_tournament(4);
        assert_eq!(sigma_counts(&t4, &[0, 1, 2, 3], true).unwrap(), (3, 1));
        assert_eq!(sigma_counts(&t4, &[0, 1, 2, 3], false).unwrap(), (3, 0));
    }

    #[test]
    fn walk_errors() {
        let c4 = OrientedGraph::directed_cycle(4);
        assert_eq!(
            sigma_counts(&c4, &[0, 2, 1, 3], true),
            Err(WalkError::NotAdjacent {
                position: 0,
                next: 1,
                u: 0,
                v: 2
            })
        );
        assert_eq!(
            sigma_counts(&c4, &[0, 1, 0], false),
            Err(WalkError::RepeatedVertex { position: 2, vertex: 0 })
        );
        let edge = OrientedGraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(sigma_counts(&edge, &[0, 1], true), Err(WalkError::CycleTooShort(2)));
        assert_eq!(sigma_counts(&edge, &[0, 1], false).unwrap(), (1, 0));
    }

    #[test]
    fn canonical_form() {
        let c4 = OrientedGraph::directed_cycle(4);
        let cert = Certificate::cycle(&c4, vec![2, 1, 0, 3], Method::External, false).unwrap();
        assert_eq!(cert.cycle, vec![0, 1, 2, 3]);
        assert_eq!((cert.sigma_plus, cert.sigma_minus, cert.sigma_max), (4, 0, 4));
        // tie: 0-1-2-3 with two aligned edges each way; second vertex decides
        let g = OrientedGraph::from_edges(4, [(0, 1), (2, 1), (2, 3), (0, 3)]).unwrap();
        let cert = Certificate::cycle(&g, vec![3, 2, 1, 0], Method::External, false).unwrap();
        assert_eq!(cert.cycle, vec![0, 1, 2, 3]);
        assert_eq!(cert.sigma_plus, 2);
    }

    #[test]
    fn validation_flags() {
        let c3 = OrientedGraph::directed_cycle(3);
        let good = Certificate::cycle(&c3, vec![0, 1, 2], Method::External, true).unwrap();
        assert!(validate_certificate(&c3, &good, Spanning::Required).valid);

        let mut inflated = good.clone();
        inflated.sigma_plus += 1;
        let v = validate_certificate(&c3, &inflated, Spanning::Required);
        assert!(!v.valid);
        assert!(v.violations[0].to_string().starts_with("count mismatch"));

        let c4 = OrientedGraph::transitive_tournament(4);
        let partial = Certificate::cycle(&c4, vec![0, 1, 2], Method::External, false).unwrap();
        let v = validate_certificate(&c4, &partial, Spanning::Required);
        assert!(!v.valid);
        assert!(v.violations[0].to_string().starts_with("not spanning"));
        assert!(validate_certificate(&c4, &partial, Spanning::NotRequired).valid);
    }

    #[test]
    fn json_field_order() {
        let c3 = OrientedGraph::directed_cycle(3);
        let cert = Certificate::cycle(&c3, vec![0, 1, 2], Method::ExactDp, true).unwrap();
        assert_eq!(
            serde_json::to_string(&cert).unwrap(),
            r#"{"n":3,"cycle":[0,1,2],"cyclic":true,"sigma_plus":3,"sigma_minus":0,"sigma_max":3,"optimal":true,"method":"exact-dp"}"#
        );
    }

    fn arb_cycle() -> impl Strategy<Value = (OrientedGraph, Vec<usize>)> {
        (3usize..40, any::<u64>(), any::<u64>()).prop_map(|(n, s1, s2)| {
            use rand::seq::SliceRandom;
            let mut rng = crate::rng::rng_from_seed(s1);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut rng = crate::rng::rng_from_seed(s2);
            let mut g = OrientedGraph::empty(n);
            for i in 0..n {
                let (u, v) = (order[i], order[(i + 1) % n]);
                if rand::Rng::gen_bool(&mut rng, 0.5) {
                    g.add_edge(u, v).unwrap();
                } else {
                    g.add_edge(v, u).unwrap();
                }
            }
            (g, order)
        })
    }

    proptest! {
        #[test]
        fn reversal_rotation_conservation((g, seq) in arb_cycle(), k in 0usize..40) {
            let (p, m) = sigma_counts(&g, &seq, true).unwrap();
            prop_assert_eq!(p + m, seq.len());
            let rev: Vec<usize> = seq.iter().rev().copied().collect();
            prop_assert_eq!(sigma_counts(&g, &rev, true).unwrap(), (m, p));
            let mut rot = seq.clone();
            rot.rotate_left(k % seq.len());
            prop_assert_eq!(sigma_counts(&g, &rot, true).unwrap(), (p, m));
            let cert = Certificate::cycle(&g, seq.clone(), Method::External, false).unwrap();
            prop_assert!(2 * cert.sigma_max >= g.n());
            prop_assert_eq!(cert.sigma_plus, cert.sigma_max);
            prop_assert_eq!(cert.canonical(), cert.clone());
        }
    }
}
