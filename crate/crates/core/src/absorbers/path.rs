use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{select_disjoint_tuples_capped, AbsorberConfig, AbsorberError, Counter, TupleFamilies, WeakCountMode};
use crate::bitset::VertexSet;
use crate::discrepancy::{aligned, sigma_counts, Certificate, Method, PathCertificate};
use crate::graph::OrientedGraph;
use crate::rng::{derive_seed, rng_from_seed, Rng};

/// Candidate absorbers sampled per vertex or pair before selection.
const CANDIDATES_PER_PAIR: usize = 256;
/// Weak absorbers enumerated per vertex before sampling.
const WEAK_ENUMERATION_LIMIT: usize = 4096;
/// Worst-case path vertices per strong gadget (2 + one connector).
const STRONG_COST: usize = 3;
/// Worst-case path vertices per weak gadget (4 + inner connector + one connector).
const WEAK_COST: usize = 6;

/// An absorber embedded in the path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Gadget {
    /// `a` and `b` are consecutive on the path. Absorbs `w ~ a, b` as `a w b`.
    Strong { a: usize, b: usize },
    /// The path runs `a, a_in, inner.., b_in, b`. Absorbs `w ~ a, b` as
    /// `a w b`, handing the freed `a_in .. b_in` segment to a strong gadget.
    Weak {
        a: usize,
        a_in: usize,
        b_in: usize,
        b: usize,
        inner: Vec<usize>,
    },
}

impl Gadget {
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            Gadget::Strong { a, b } => vec![*a, *b],
            Gadget::Weak {
                a,
                a_in,
                b_in,
                b,
                inner,
            } => {
                let mut v = vec![*a, *a_in];
                v.extend(inner);
                v.extend([*b_in, *b]);
                v
            }
        }
    }

    /// Path segment in gadget order.
    fn piece(&self) -> Vec<usize> {
        self.vertices()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbsorbingPath {
    pub path: PathCertificate,
    pub gadgets: Vec<Gadget>,
    /// Vertices used only to join gadgets.
    pub connectors: Vec<usize>,
    /// `floor(8 sqrt(mu) n)`.
    pub budget: usize,
    pub strong_vertices: usize,
    pub weak_vertices: usize,
    pub neither_vertices: usize,
    /// Vertices with no selected gadget able to absorb them directly.
    pub uncovered_vertices: usize,
    pub warnings: Vec<String>,
}

impl AbsorbingPath {
    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::from_iter_with_capacity(self.path.n, self.path.cycle.iter().copied())
    }

    pub fn strong_gadgets(&self) -> usize {
        self.gadgets.iter().filter(|g| matches!(g, Gadget::Strong { .. })).count()
    }
}

fn sample(mut list: Vec<Vec<usize>>, limit: usize, rng: &mut Rng) -> Vec<Vec<usize>> {
    if list.len() > limit {
        list.shuffle(rng);
        list.truncate(limit);
        list.sort_unstable();
    }
    list
}

/// Strong absorbers `{a, b}` of `{x, y}` avoiding `excluded`, sorted.
fn strong_list(counter: &Counter, x: usize, y: usize, excluded: &VertexSet) -> Vec<Vec<usize>> {
    let (nx, ny) = (counter.nbrs(x), counter.nbrs(y));
    let mut out = Vec::new();
    let mut ends = nx.clone();
    ends.union_with(ny);
    for a in ends.iter() {
        if a == x || a == y || excluded.contains(a) {
            continue;
        }
        for b in counter.nbrs(a).iter() {
            if b <= a || b == x || b == y || excluded.contains(b) {
                continue;
            }
            if (nx.contains(a) && ny.contains(b)) || (ny.contains(a) && nx.contains(b)) {
                out.push(vec![a, b]);
            }
        }
    }
    out
}

fn free_connector(counter: &Counter, u: usize, v: usize, used: &VertexSet) -> Option<usize> {
    let mut c = counter.nbrs(u).intersection(counter.nbrs(v));
    c.difference_with(used);
    c.first()
}

/// Selects disjoint weak then strong absorbers and chains them into a single
/// path of at most `8 sqrt(mu) n` vertices.
pub fn build_absorbing_path(
    g: &OrientedGraph,
    config: &AbsorberConfig,
    seed: u64,
) -> Result<AbsorbingPath, AbsorberError> {
    config.validate()?;
    let n = g.n();
    let mut warnings = Vec::new();
    match g.sigma2() {
        Ok(s) if s as f64 >= (1.0 + config.eta) * n as f64 => {}
        Ok(s) => warnings.push(format!(
            "sigma2 = {s} is below (1 + eta) n = {:.1}; building best effort",
            (1.0 + config.eta) * n as f64
        )),
        Err(e) => warnings.push(format!("sigma2 undefined: {e}")),
    }
    if !config.mu_coupled() {
        warnings.push(format!(
            "mu = {} exceeds alpha2^2 / 1024 = {:.3e}; mu is kept independent",
            config.mu,
            config.alpha2 * config.alpha2 / 1024.0
        ));
    }
    let budget = config.absorbing_budget(n);
    let strong_min = config.strong_threshold(n);
    let weak_min = config.weak_threshold(n);
    let mut counter = Counter::new(g);
    let mut rng = rng_from_seed(derive_seed(seed, 0));

    let mut strong_vs = Vec::new();
    let mut weak_vs = Vec::new();
    let mut neither = 0;
    for v in 0..n {
        if counter.strong(v, v) as f64 >= strong_min {
            strong_vs.push(v);
        } else if counter.weak(v, v, strong_min, WeakCountMode::Factorized) as f64 >= weak_min {
            weak_vs.push(v);
        } else {
            neither += 1;
        }
    }
    if neither > 0 {
        warnings.push(format!("{neither} vertex(es) are neither strongly nor weakly absorbable"));
    }

    // weak gadgets first, then strong gadgets avoiding their vertices
    let mut weak_families = TupleFamilies::new();
    for &v in &weak_vs {
        let tuples = counter.weak_tuples(v, v, strong_min, WEAK_ENUMERATION_LIMIT);
        let list = tuples.iter().map(|t| t.to_vec()).collect();
        weak_families.insert((v, v), sample(list, CANDIDATES_PER_PAIR, &mut rng));
    }
    let weak_cap = if weak_vs.is_empty() { 0 } else { budget / (2 * (WEAK_COST + STRONG_COST)) };
    let weak_sel = select_disjoint_tuples_capped(&weak_families, 4, weak_cap, derive_seed(seed, 1))?;
    let mut used = VertexSet::new(n);
    for t in &weak_sel.tuples {
        for &v in t {
            used.insert(v);
        }
    }
    let mut strong_families = TupleFamilies::new();
    for &v in &strong_vs {
        let list = strong_list(&counter, v, v, &used);
        strong_families.insert((v, v), sample(list, CANDIDATES_PER_PAIR, &mut rng));
    }
    for t in &weak_sel.tuples {
        let key = (t[1].min(t[2]), t[1].max(t[2]));
        let list = strong_list(&counter, t[1], t[2], &used);
        strong_families.insert(key, sample(list, CANDIDATES_PER_PAIR, &mut rng));
    }
    let strong_cap = budget.saturating_sub(WEAK_COST * weak_sel.tuples.len()) / STRONG_COST;
    let strong_sel = select_disjoint_tuples_capped(&strong_families, 2, strong_cap, derive_seed(seed, 2))?;
    for t in &strong_sel.tuples {
        used.insert(t[0]);
        used.insert(t[1]);
    }

    let mut gadgets = Vec::new();
    let mut connectors = Vec::new();
    for t in &weak_sel.tuples {
        let (a, a_in, b_in, b) = (t[0], t[1], t[2], t[3]);
        let inner = if g.adjacent(a_in, b_in) {
            Vec::new()
        } else if let Some(c) = free_connector(&counter, a_in, b_in, &used) {
            used.insert(c);
            vec![c]
        } else {
            warnings.push(format!("weak absorber {t:?} dropped: inner pair has no free connector"));
            continue;
        };
        gadgets.push(Gadget::Weak {
            a,
            a_in,
            b_in,
            b,
            inner,
        });
    }
    for t in &strong_sel.tuples {
        let (a, b) = if g.has_edge(t[1], t[0]) { (t[1], t[0]) } else { (t[0], t[1]) };
        gadgets.push(Gadget::Strong { a, b });
    }
    if gadgets.is_empty() {
        return Err(AbsorberError::NoGadgets);
    }

    // chain: append at either end, aligned joins first, then any direct
    // join, then through one free connector
    let mut seq: Vec<usize> = gadgets[0].piece();
    let mut remaining: Vec<usize> = (1..gadgets.len()).collect();
    while !remaining.is_empty() {
        let end = *seq.last().unwrap();
        let front = seq[0];
        let mut choice = None;
        'search: for pass in 0..3 {
            for (k, &gi) in remaining.iter().enumerate() {
                let piece = gadgets[gi].piece();
                let rev: Vec<usize> = piece.iter().rev().copied().collect();
                for (at_end, p) in [(true, &piece), (true, &rev), (false, &piece), (false, &rev)] {
                    let (x, y) = if at_end { (end, p[0]) } else { (p[p.len() - 1], front) };
                    let ok = match pass {
                        0 => g.has_edge(x, y),
                        1 => g.adjacent(x, y),
                        _ => false,
                    };
                    if ok {
                        choice = Some((k, at_end, p.clone(), None));
                        break 'search;
                    }
                    if pass == 2 {
                        if let Some(c) = free_connector(&counter, x, y, &used) {
                            choice = Some((k, at_end, p.clone(), Some(c)));
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((k, at_end, piece, connector)) = choice else {
            return Err(AbsorberError::ChainingStalled {
                end,
                remaining: remaining.len(),
            });
        };
        remaining.remove(k);
        if let Some(c) = connector {
            used.insert(c);
            connectors.push(c);
        }
        if at_end {
            seq.extend(connector);
            seq.extend(piece);
        } else {
            let mut head = piece;
            head.extend(connector);
            head.extend(seq);
            seq = head;
        }
    }
    debug_assert!(seq.len() <= budget.max(gadgets.len() * WEAK_COST));

    let mut covered = VertexSet::new(n);
    for gadget in &gadgets {
        if let Gadget::Strong { a, b } = gadget {
            covered.union_with(&counter.nbrs(*a).intersection(counter.nbrs(*b)));
        }
    }
    let on_path = VertexSet::from_iter_with_capacity(n, seq.iter().copied());
    let uncovered_vertices = (0..n).filter(|&v| !on_path.contains(v) && !covered.contains(v)).count();
    let path = Certificate::path(g, seq, Method::Pipeline).expect("chaining only uses edges of U(G)");
    Ok(AbsorbingPath {
        path,
        gadgets,
        connectors,
        budget,
        strong_vertices: strong_vs.len(),
        weak_vertices: weak_vs.len(),
        neither_vertices: neither,
        uncovered_vertices,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Absorption {
    /// Spanning path on the old path plus the leftovers, same ends, same
    /// traversal direction as the input.
    pub path: PathCertificate,
    pub strong_used: usize,
    pub weak_used: usize,
    /// `sigma_plus` along the input direction, before and after.
    pub sigma_plus_before: usize,
    pub sigma_plus_after: usize,
}

fn position(seq: &[usize], v: usize) -> usize {
    seq.iter().position(|&x| x == v).expect("gadget vertex on path")
}

fn plus(g: &OrientedGraph, seq: &[usize]) -> usize {
    sigma_counts(g, seq, false).expect("absorption keeps a path").0
}

/// Inserts `w` between the consecutive vertices `a`, `b`.
fn insert_between(seq: &mut Vec<usize>, a: usize, b: usize, items: &[usize]) {
    let (pa, pb) = (position(seq, a), position(seq, b));
    let at = pa.max(pb);
    // keep items oriented from a to b along the sequence
    let ordered: Vec<usize> = if pa < pb {
        items.to_vec()
    } else {
        items.iter().rev().copied().collect()
    };
    seq.splice(at..at, ordered);
}

type Choice = Option<(i64, Vec<usize>, Vec<usize>)>;

/// Keeps the first candidate with the largest gain.
fn consider(best: &mut Choice, gain: i64, candidate: Vec<usize>, consumed: Vec<usize>) {
    if best.as_ref().is_none_or(|(b, _, _)| gain > *b) {
        *best = Some((gain, candidate, consumed));
    }
}

/// Absorbs `leftovers` into the absorbing path. Each vertex takes a strong gadget,
/// or a weak gadget whose freed segment moves into a strong gadget. Among
/// feasible choices the one with the largest `sigma_plus` gain is taken.
pub fn absorb_leftovers(
    g: &OrientedGraph,
    abs: &AbsorbingPath,
    leftovers: &[usize],
) -> Result<Absorption, AbsorberError> {
    let mut seq = abs.path.cycle.clone();
    let on_path = abs.vertex_set();
    for &w in leftovers {
        if w >= g.n() {
            return Err(AbsorberError::VertexOutOfRange { vertex: w, n: g.n() });
        }
        if on_path.contains(w) {
            return Err(AbsorberError::LeftoverOnPath(w));
        }
    }
    let before = plus(g, &seq);
    let mut live = vec![true; abs.gadgets.len()];
    let strong_fits = |gi: usize, w: usize| match &abs.gadgets[gi] {
        Gadget::Strong { a, b } => g.adjacent(*a, w) && g.adjacent(*b, w),
        Gadget::Weak { .. } => false,
    };
    // most constrained vertices first
    let mut order = leftovers.to_vec();
    order.sort_by_key(|&w| ((0..abs.gadgets.len()).filter(|&gi| strong_fits(gi, w)).count(), w));
    let (mut strong_used, mut weak_used) = (0, 0);
    for w in order {
        let current = plus(g, &seq) as i64;
        let mut best: Choice = None;
        for gi in 0..abs.gadgets.len() {
            if !live[gi] || !strong_fits(gi, w) {
                continue;
            }
            let Gadget::Strong { a, b } = abs.gadgets[gi] else { unreachable!() };
            let (pa, pb) = (position(&seq, a), position(&seq, b));
            let (x, y) = if pa < pb { (a, b) } else { (b, a) };
            let gain = aligned(g, x, w) as i64 + aligned(g, w, y) as i64 - aligned(g, x, y) as i64;
            let mut candidate = seq.clone();
            insert_between(&mut candidate, a, b, &[w]);
            consider(&mut best, gain, candidate, vec![gi]);
        }
        if best.is_none() {
            for wi in 0..abs.gadgets.len() {
                let Gadget::Weak { a, b, .. } = abs.gadgets[wi] else { continue };
                if !live[wi] || !g.adjacent(a, w) || !g.adjacent(b, w) {
                    continue;
                }
                let (pa, pb) = (position(&seq, a), position(&seq, b));
                let (lo, hi) = (pa.min(pb), pa.max(pb));
                let segment: Vec<usize> = seq[lo + 1..hi].to_vec();
                let mut base = seq.clone();
                base.splice(lo + 1..hi, [w]);
                for si in 0..abs.gadgets.len() {
                    let Gadget::Strong { a: c, b: d } = abs.gadgets[si] else { continue };
                    if !live[si] {
                        continue;
                    }
                    let (pc, pd) = (position(&base, c), position(&base, d));
                    let (x, y) = if pc < pd { (c, d) } else { (d, c) };
                    for seg in [segment.clone(), segment.iter().rev().copied().collect::<Vec<_>>()] {
                        if !g.adjacent(x, seg[0]) || !g.adjacent(seg[seg.len() - 1], y) {
                            continue;
                        }
                        let mut candidate = base.clone();
                        let at = pc.max(pd);
                        candidate.splice(at..at, seg.iter().copied());
                        let gain = plus(g, &candidate) as i64 - current;
                        consider(&mut best, gain, candidate, vec![wi, si]);
                    }
                }
            }
        }
        let Some((_, candidate, consumed)) = best else {
            return Err(AbsorberError::NoGadgetFor(w));
        };
        if consumed.len() == 1 {
            strong_used += 1;
        } else {
            weak_used += 1;
            strong_used += 1;
        }
        for gi in consumed {
            live[gi] = false;
        }
        seq = candidate;
    }
    let path = Certificate::from_sequence(g, seq, false, Method::Pipeline, false).expect("absorption keeps a path");
    Ok(Absorption {
        sigma_plus_after: path.sigma_plus,
        path,
        strong_used,
        weak_used,
        sigma_plus_before: before,
    })
}
