use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::AbsorberError;
use crate::rng::rng_from_seed;

/// Candidate tuples per pair. A pair `(v, v)` stands for a single vertex.
pub type TupleFamilies = BTreeMap<(usize, usize), Vec<Vec<usize>>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairHits {
    pub pair: (usize, usize),
    pub candidates: usize,
    /// Kept tuples that belong to this pair's family.
    pub hits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointSelection {
    pub tuples: Vec<Vec<usize>>,
    pub cap: usize,
    pub pairs: Vec<PairHits>,
    /// Pairs with at least one candidate but no kept tuple.
    pub pairs_missed: usize,
}

/// Vertex-disjoint tuples, at most `floor(sigma * n / 64)` of them.
pub fn select_disjoint_tuples(
    families: &TupleFamilies,
    sigma: f64,
    t: usize,
    n: usize,
    seed: u64,
) -> Result<DisjointSelection, AbsorberError> {
    let cap = (sigma * n as f64 / 64.0).floor().max(0.0) as usize;
    select_disjoint_tuples_capped(families, t, cap, seed)
}

/// Seeded greedy selection of vertex-disjoint tuples, at most `cap`.
///
/// First, while some pair has no kept tuple, the disjoint tuple hitting the
/// most such pairs is kept (random tie-break). Then remaining tuples are
/// scanned in uniformly random order and kept when disjoint. Disjointness and
/// the cap always hold; per-pair hits are reported, not guaranteed.
pub fn select_disjoint_tuples_capped(
    families: &TupleFamilies,
    t: usize,
    cap: usize,
    seed: u64,
) -> Result<DisjointSelection, AbsorberError> {
    if !(1..=4).contains(&t) {
        return Err(AbsorberError::BadArity(t));
    }
    let mut ids: HashMap<&[usize], usize> = HashMap::new();
    let mut tuples: Vec<&[usize]> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let pairs: Vec<(usize, usize)> = families.keys().copied().collect();
    for (p, (&pair, list)) in families.iter().enumerate() {
        for tuple in list {
            if tuple.len() != t {
                return Err(AbsorberError::ArityMismatch {
                    pair,
                    tuple: tuple.clone(),
                    expected: t,
                    got: tuple.len(),
                });
            }
            let id = *ids.entry(tuple.as_slice()).or_insert_with(|| {
                tuples.push(tuple.as_slice());
                members.push(Vec::new());
                tuples.len() - 1
            });
            if members[id].last() != Some(&p) {
                members[id].push(p);
            }
        }
    }
    let universe = tuples.iter().flat_map(|t| t.iter()).max().map_or(0, |&m| m + 1);
    let mut rng = rng_from_seed(seed);
    let keys: Vec<u64> = (0..tuples.len()).map(|_| rng.gen()).collect();
    let mut used = vec![false; universe];
    let mut hits = vec![0usize; pairs.len()];
    let mut kept: Vec<usize> = Vec::new();
    let fits = |id: usize, used: &[bool]| {
        let tuple = tuples[id];
        tuple.iter().all(|&v| !used[v]) && (0..tuple.len()).all(|i| !tuple[i + 1..].contains(&tuple[i]))
    };
    let keep = |id: usize, used: &mut Vec<bool>, hits: &mut Vec<usize>, kept: &mut Vec<usize>| {
        for &v in tuples[id] {
            used[v] = true;
        }
        for &p in &members[id] {
            hits[p] += 1;
        }
        kept.push(id);
    };

    while kept.len() < cap {
        let best = (0..tuples.len())
            .filter(|&id| fits(id, &used))
            .map(|id| (members[id].iter().filter(|&&p| hits[p] == 0).count(), keys[id], id))
            .filter(|&(gain, _, _)| gain > 0)
            .max();
        match best {
            Some((_, _, id)) => keep(id, &mut used, &mut hits, &mut kept),
            None => break,
        }
    }
    let mut order: Vec<usize> = (0..tuples.len()).collect();
    order.shuffle(&mut rng);
    for id in order {
        if kept.len() >= cap {
            break;
        }
        if fits(id, &used) {
            keep(id, &mut used, &mut hits, &mut kept);
        }
    }

    let pair_hits: Vec<PairHits> = pairs
        .iter()
        .zip(families.values())
        .zip(&hits)
        .map(|((&pair, list), &h)| PairHits {
            pair,
            candidates: list.len(),
            hits: h,
        })
        .collect();
    Ok(DisjointSelection {
        tuples: kept.iter().map(|&id| tuples[id].to_vec()).collect(),
        cap,
        pairs_missed: pair_hits.iter().filter(|p| p.candidates > 0 && p.hits == 0).count(),
        pairs: pair_hits,
    })
}
