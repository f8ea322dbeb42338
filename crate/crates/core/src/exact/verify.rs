use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{SolveError, SubsetDp};
use crate::graph::{enumerate_oriented_graphs, OrientedGraph};

/// Largest `n` accepted by [`verify_small`].
pub const VERIFY_MAX_N: usize = 6;
/// Largest `n` that runs without [`VerifyOptions::allow_large`].
pub const VERIFY_UNGATED_MAX_N: usize = 5;

/// Which graphs are checked: those with `sigma2` at or above a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// `sigma2(G) >= n`
    Sigma2AtLeastN,
    Sigma2AtLeast(usize),
}

impl Condition {
    pub fn threshold(&self, n: usize) -> usize {
        match *self {
            Condition::Sigma2AtLeastN => n,
            Condition::Sigma2AtLeast(t) => t,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Sigma2AtLeastN => write!(f, "sigma2>=n"),
            Condition::Sigma2AtLeast(t) => write!(f, "sigma2>={t}"),
        }
    }
}

impl FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rhs = s
            .trim()
            .strip_prefix("sigma2>=")
            .ok_or_else(|| format!("expected `sigma2>=n` or `sigma2>=K`, got {s:?}"))?;
        if rhs == "n" {
            return Ok(Condition::Sigma2AtLeastN);
        }
        rhs.parse()
            .map(Condition::Sigma2AtLeast)
            .map_err(|_| format!("invalid threshold {rhs:?}"))
    }
}

/// The inequality checked on every graph meeting the condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    /// Some Hamilton cycle has `sigma_max >= ceil(sigma2 / 2)`.
    HalfSigma2,
    /// Some Hamilton cycle has `sigma_max >= ceil(n / 2)`.
    HalfN,
    /// A Hamilton cycle exists.
    Hamiltonian,
}

impl Claim {
    /// Required `sigma_max`, or `None` when only existence is claimed.
    pub fn required(&self, n: usize, sigma2: usize) -> Option<usize> {
        match self {
            Claim::HalfSigma2 => Some(sigma2.div_ceil(2)),
            Claim::HalfN => Some(n.div_ceil(2)),
            Claim::Hamiltonian => None,
        }
    }

    pub fn holds(&self, n: usize, sigma2: usize, best_sigma_max: Option<usize>) -> bool {
        match (best_sigma_max, self.required(n, sigma2)) {
            (None, _) => false,
            (Some(_), None) => true,
            (Some(best), Some(req)) => best >= req,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::HalfSigma2 => "half-sigma2",
            Claim::HalfN => "half-n",
            Claim::Hamiltonian => "hamiltonian",
        })
    }
}

impl FromStr for Claim {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "conj13" | "half-sigma2" => Ok(Claim::HalfSigma2),
            "halfn" | "half-n" => Ok(Claim::HalfN),
            "hamiltonian" | "ham" => Ok(Claim::Hamiltonian),
            other => Err(format!("unknown claim {other:?} (expected half-sigma2, half-n or hamiltonian)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Worker threads; the enumeration index range is split evenly.
    pub parallel: usize,
    pub allow_large: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            parallel: 1,
            allow_large: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Enumeration index of the graph.
    pub index: u64,
    pub edges: Vec<(usize, usize)>,
    pub sigma2: usize,
    /// `None` when the graph has no Hamilton cycle.
    pub best_sigma_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub condition: Condition,
    pub claim: Claim,
    pub graphs_scanned: u64,
    pub graphs_meeting_condition: u64,
    /// Graphs meeting the condition that failed the quick non-Hamiltonicity
    /// filter (disconnected, or a vertex of degree below 2). Each of these is
    /// also listed as a counterexample.
    pub filtered_non_hamiltonian: u64,
    pub counterexamples: Vec<Counterexample>,
    pub wall_time_ms: u128,
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// Re-solves every listed counterexample from scratch and confirms that
    /// each one really violates the claim.
    pub fn revalidate(&self) -> bool {
        self.counterexamples.iter().all(|c| {
            let Ok(g) = OrientedGraph::from_edges(self.n, c.edges.iter().copied()) else {
                return false;
            };
            let Ok(sigma2) = g.sigma2() else { return false };
            let best = SubsetDp::new(self.n).ok().and_then(|mut dp| dp.value(&g));
            sigma2 == c.sigma2 && best == c.best_sigma_max && !self.claim.holds(self.n, sigma2, best)
        })
    }
}

#[derive(Default)]
struct Partial {
    scanned: u64,
    meeting: u64,
    filtered: u64,
    counterexamples: Vec<Counterexample>,
}

fn scan(n: usize, range: std::ops::Range<u64>, threshold: usize, claim: Claim) -> Partial {
    let enumeration = enumerate_oriented_graphs(n).expect("n checked by caller");
    let mut dp = SubsetDp::new(n).expect("n checked by caller");
    let mut part = Partial::default();
    for index in range {
        let g = enumeration.graph_at(index);
        part.scanned += 1;
        let sigma2 = g.sigma2().expect("n >= 3");
        if sigma2 < threshold {
            continue;
        }
        part.meeting += 1;
        let best = if g.min_degree() < 2 || !g.is_connected() {
            part.filtered += 1;
            None
        } else {
            dp.value(&g)
        };
        if !claim.holds(n, sigma2, best) {
            part.counterexamples.push(Counterexample {
                index,
                edges: g.edges().collect(),
                sigma2,
                best_sigma_max: best,
            });
        }
    }
    part
}

/// Checks `claim` on every labelled oriented graph on `n` vertices that
/// satisfies `condition`. Output is independent of `opts.parallel`.
pub fn verify_small(
    n: usize,
    condition: Condition,
    claim: Claim,
    opts: &VerifyOptions,
) -> Result<VerificationReport, SolveError> {
    if n < 3 {
        return Err(SolveError::TooFewVertices(n));
    }
    if n > VERIFY_MAX_N {
        return Err(SolveError::TooLarge {
            what: "verification",
            n,
            max: VERIFY_MAX_N,
        });
    }
    if n > VERIFY_UNGATED_MAX_N && !opts.allow_large {
        return Err(SolveError::Domain(format!(
            "n = {n} enumerates 3^{} graphs; pass allow_large to run it",
            n * (n - 1) / 2
        )));
    }
    let started = Instant::now();
    let threshold = condition.threshold(n);
    let ranges = enumerate_oriented_graphs(n)
        .expect("n <= VERIFY_MAX_N")
        .partition(opts.parallel.max(1));
    let parts: Vec<Partial> = if ranges.len() <= 1 {
        ranges.into_iter().map(|r| scan(n, r, threshold, claim)).collect()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .into_iter()
                .map(|r| scope.spawn(move || scan(n, r, threshold, claim)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let mut report = VerificationReport {
        n,
        condition,
        claim,
        graphs_scanned: 0,
        graphs_meeting_condition: 0,
        filtered_non_hamiltonian: 0,
        counterexamples: Vec::new(),
        wall_time_ms: 0,
        note: None,
    };
    // ranges are in index order, so concatenation keeps counterexamples sorted
    for part in parts {
        report.graphs_scanned += part.scanned;
        report.graphs_meeting_condition += part.meeting;
        report.filtered_non_hamiltonian += part.filtered;
        report.counterexamples.extend(part.counterexamples);
    }
    if claim == Claim::HalfN && n % 2 == 1 {
        report.note = Some(format!(
            "checked the ceiling form sigma_max >= {} rather than n/2 = {}.5",
            n.div_ceil(2),
            n / 2
        ));
    }
    if claim == Claim::HalfSigma2 {
        report.note = Some("checked the ceiling form sigma_max >= ceil(sigma2/2)".into());
    }
    report.wall_time_ms = started.elapsed().as_millis();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_condition_and_claim() {
        assert_eq!("sigma2>=n".parse::<Condition>().unwrap(), Condition::Sigma2AtLeastN);
        assert_eq!("sigma2>=7".parse::<Condition>().unwrap(), Condition::Sigma2AtLeast(7));
        assert!("sigma>=n".parse::<Condition>().is_err());
        assert_eq!("conj13".parse::<Claim>().unwrap(), Claim::HalfSigma2);
        assert_eq!("halfn".parse::<Claim>().unwrap(), Claim::HalfN);
        assert!("nope".parse::<Claim>().is_err());
    }

    #[test]
    fn n3_hamiltonicity() {
        let r = verify_small(3, Condition::Sigma2AtLeast(3), Claim::Hamiltonian, &VerifyOptions::default()).unwrap();
        assert_eq!(r.graphs_scanned, 27);
        // only the 8 tournaments on 3 vertices reach sigma2 >= 3
        assert_eq!(r.graphs_meeting_condition, 8);
        assert!(r.holds());
    }

    #[test]
    fn n4_half_sigma2_and_parallel_determinism() {
        let serial = verify_small(4, Condition::Sigma2AtLeastN, Claim::HalfSigma2, &VerifyOptions::default()).unwrap();
        assert_eq!(serial.graphs_scanned, 729);
        assert!(serial.holds());
        let par = verify_small(
            4,
            Condition::Sigma2AtLeastN,
            Claim::HalfSigma2,
            &VerifyOptions {
                parallel: 4,
                allow_large: false,
            },
        )
        .unwrap();
        assert_eq!(par.graphs_meeting_condition, serial.graphs_meeting_condition);
        assert_eq!(par.counterexamples, serial.counterexamples);
    }

    #[test]
    fn counterexamples_are_reported_and_revalidate() {
        // claiming sigma_max >= ceil(sigma2/2) with no sigma2 condition fails
        // on graphs without Hamilton cycles
        let r = verify_small(4, Condition::Sigma2AtLeast(0), Claim::Hamiltonian, &VerifyOptions::default()).unwrap();
        assert!(!r.holds());
        assert!(r.revalidate());
        assert!(r.counterexamples.windows(2).all(|w| w[0].index < w[1].index));
    }

    #[test]
    fn guards() {
        assert!(verify_small(6, Condition::Sigma2AtLeastN, Claim::HalfN, &VerifyOptions::default()).is_err());
        assert!(verify_small(7, Condition::Sigma2AtLeastN, Claim::HalfN, &VerifyOptions::default()).is_err());
        assert!(verify_small(2, Condition::Sigma2AtLeastN, Claim::HalfN, &VerifyOptions::default()).is_err());
    }
}
