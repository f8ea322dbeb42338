//! The extremal family: a transitive tournament on `r` vertices blown up by
//! independent sets of sizes `(t, ell, ..., ell)`.
//!
//! For `n <= h <= 2(n-1)` the construction picks `r` with
//! `2(1 - 1/(r-1)) n <= h <= 2(1 - 1/r) n`, sets `t = (r-1)/2 h - (r-2) n`
//! and `ell = (n - t)/(r - 1)`. The resulting graph has `sigma2 = h` and no
//! Hamilton cycle with more than `h/2` edges in one direction.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{compose, OrientedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtremalParams {
    pub n: usize,
    pub h: usize,
    pub r: usize,
    pub t: usize,
    pub ell: usize,
}

/// Why a particular `r` does not instantiate the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedOrder {
    pub r: usize,
    pub reason: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtremalError {
    #[error("n = {0} is below the minimum of 4")]
    TooFewVertices(usize),
    #[error("h = {h} lies outside [n, 2(n-1)] = [{n}, {}]", 2 * (n - 1))]
    HOutOfDomain { n: usize, h: usize },
    #[error("(n = {n}, h = {h}) admits no integral construction: {}", format_rejections(.rejected))]
    Infeasible {
        n: usize,
        h: usize,
        rejected: Vec<RejectedOrder>,
    },
    #[error("parameters {0:?} are inconsistent")]
    InvalidParams(ExtremalParams),
}

fn format_rejections(rejected: &[RejectedOrder]) -> String {
    rejected
        .iter()
        .map(|r| format!("r={}: {}", r.r, r.reason))
        .collect::<Vec<_>>()
        .join("; ")
}

impl fmt::Display for ExtremalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} h={} r={} t={} ell={}", self.n, self.h, self.r, self.t, self.ell)
    }
}

/// `2(1 - 1/(r-1)) n <= h <= 2(1 - 1/r) n`, in integer arithmetic.
pub(crate) fn in_interval(n: usize, value: usize, r: usize) -> bool {
    let lower_ok = 2 * (r - 2) * n <= value * (r - 1);
    let upper_ok = value * r <= 2 * (r - 1) * n;
    lower_ok && upper_ok
}

fn try_order(n: usize, h: usize, r: usize) -> Result<ExtremalParams, String> {
    // 2t = (r-1) h - 2(r-2) n
    let twice_t = ((r - 1) * h) as i64 - (2 * (r - 2) * n) as i64;
    if twice_t < 0 {
        return Err(format!("t = {}/2 is negative", twice_t));
    }
    if twice_t % 2 != 0 {
        return Err(format!("t = {twice_t}/2 is not an integer"));
    }
    let t = (twice_t / 2) as usize;
    if t > n {
        return Err(format!("t = {t} exceeds n"));
    }
    if t * r > n {
        return Err(format!("t = {t} exceeds n/r"));
    }
    if (n - t) % (r - 1) != 0 {
        return Err(format!("ell = {}/{} is not an integer", n - t, r - 1));
    }
    let ell = (n - t) / (r - 1);
    if ell < 1 {
        return Err("ell is zero".into());
    }
    Ok(ExtremalParams { n, h, r, t, ell })
}

/// Smallest `r >= 2` for which the construction is integral.
pub fn extremal_params(n: usize, h: usize) -> Result<ExtremalParams, ExtremalError> {
    if n < 4 {
        return Err(ExtremalError::TooFewVertices(n));
    }
    if h < n || h > 2 * (n - 1) {
        return Err(ExtremalError::HOutOfDomain { n, h });
    }
    let mut rejected = Vec::new();
    for r in 2..=n {
        if !in_interval(n, h, r) {
            continue;
        }
        match try_order(n, h, r) {
            Ok(p) => return Ok(p),
            Err(reason) => rejected.push(RejectedOrder { r, reason }),
        }
    }
    if rejected.is_empty() {
        rejected.push(RejectedOrder {
            r: 0,
            reason: "no r satisfies the interval condition".into(),
        });
    }
    Err(ExtremalError::Infeasible { n, h, rejected })
}

impl ExtremalParams {
    pub fn is_consistent(&self) -> bool {
        self.r >= 2
            && self.ell >= 1
            && self.t + (self.r - 1) * self.ell == self.n
            && self.t * self.r <= self.n
            && 2 * self.t + 2 * (self.r - 2) * self.n == (self.r - 1) * self.h
            && in_interval(self.n, self.h, self.r)
    }

    /// Part sizes `(t, ell, ..., ell)` in vertex-index order.
    pub fn part_sizes(&self) -> Vec<usize> {
        std::iter::once(self.t)
            .chain(std::iter::repeat(self.ell).take(self.r - 1))
            .collect()
    }

    /// Index of the part containing vertex `v`.
    pub fn part_of(&self, v: usize) -> usize {
        if v < self.t {
            0
        } else {
            1 + (v - self.t) / self.ell
        }
    }

    /// Predicted upper bound on `sigma_max` over Hamilton cycles.
    pub fn sigma_max_upper(&self) -> usize {
        self.h / 2
    }
}

pub fn build_extremal(params: &ExtremalParams) -> Result<OrientedGraph, ExtremalError> {
    if !params.is_consistent() {
        return Err(ExtremalError::InvalidParams(*params));
    }
    let parts: Vec<OrientedGraph> = params.part_sizes().into_iter().map(OrientedGraph::empty).collect();
    Ok(compose(&OrientedGraph::transitive_tournament(params.r), &parts).expect("one part per tournament vertex"))
}

/// Convenience: parameters and graph for `(n, h)`.
pub fn extremal_graph(n: usize, h: usize) -> Result<(ExtremalParams, OrientedGraph), ExtremalError> {
    let params = extremal_params(n, h)?;
    let g = build_extremal(&params)?;
    Ok((params, g))
}

/// Every `h` in `[n, 2(n-1)]` admitting the construction, ascending.
pub fn feasible_h_values(n: usize) -> Vec<usize> {
    if n < 4 {
        return Vec::new();
    }
    (n..=2 * (n - 1)).filter(|&h| extremal_params(n, h).is_ok()).collect()
}
