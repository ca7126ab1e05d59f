//! Good/bad split of every domain by reduced cost, and the discrepancy bound built on it.
//!
//! If a tour sends exactly `k` variables into their bad sets, each of them pays at least
//! its cheapest bad reduced cost `c*_i`, so its reduced cost sum is at least the sum of
//! the `k` smallest `c*_i`. Added to the relaxation bound this gives a valid lower bound
//! for every subproblem of discrepancy `k`.

use alloc::vec::Vec;
use core::fmt;

use crate::cost::{Cost, CostMatrix, SENTINEL};
use crate::domain::Domains;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PartitionError {
    InvalidRatio(f64),
    EmptyDomain(usize),
    MissingReducedCost { var: usize, value: usize },
}

impl fmt::Display for PartitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionError::InvalidRatio(r) => write!(f, "ratio must lie in (0, 1], got {r}"),
            PartitionError::EmptyDomain(i) => write!(f, "domain of variable {i} is empty"),
            PartitionError::MissingReducedCost { var, value } => {
                write!(f, "no reduced cost for value {value} of variable {var}")
            }
        }
    }
}

impl core::error::Error for PartitionError {}

#[derive(Debug, Clone)]
pub struct Partition {
    good: Domains,
    bad: Domains,
    min_bad: Vec<Option<Cost>>,
    l_list: Vec<Cost>,
    with_bad: usize,
    ratio: f64,
}

impl Partition {
    pub fn good(&self) -> &Domains {
        &self.good
    }

    pub fn bad(&self) -> &Domains {
        &self.bad
    }

    pub fn n(&self) -> usize {
        self.good.n()
    }

    /// Cheapest reduced cost in the bad set of `var`.
    pub fn min_bad(&self, var: usize) -> Option<Cost> {
        self.min_bad[var]
    }

    /// Cheapest bad reduced costs in nondecreasing order; variables without a bad set
    /// come last as [`SENTINEL`].
    pub fn l_list(&self) -> &[Cost] {
        &self.l_list
    }

    /// Number of variables with a nonempty bad set; the largest meaningful discrepancy.
    pub fn max_discrepancy(&self) -> usize {
        self.with_bad
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// Mean of `|good_i| / |D_i|` over the variables.
    pub fn relative_size(&self) -> f64 {
        let n = self.n();
        if n == 0 {
            return 0.0;
        }
        let total: f64 = (0..n)
            .map(|i| {
                let g = self.good.len(i);
                let all = g + self.bad.len(i);
                if all == 0 {
                    0.0
                } else {
                    g as f64 / all as f64
                }
            })
            .sum();
        total / n as f64
    }

    /// Number of variables of `succ` that take a bad value.
    pub fn discrepancy_of(&self, succ: &[usize]) -> usize {
        succ.iter()
            .enumerate()
            .filter(|&(i, &j)| self.bad.contains(i, j))
            .count()
    }
}

/// Nominal good-set size: `max(1, round(r * n))`.
pub fn good_set_target(ratio: f64, n: usize) -> usize {
    let x = ratio * n as f64;
    ((x + 0.5) as usize).max(1)
}

/// For every variable keeps the `min(|D_i|, max(1, round(r*n)))` values of lowest reduced
/// cost as good, plus every value tied with the cutoff. Ties are ordered by value index.
pub fn partition_domains(
    reduced: &CostMatrix,
    domains: &Domains,
    ratio: f64,
) -> Result<Partition, PartitionError> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(PartitionError::InvalidRatio(ratio));
    }
    let n = domains.n();
    let target = good_set_target(ratio, n);
    let mut good = Domains::empty(n);
    let mut bad = Domains::empty(n);
    let mut min_bad = Vec::with_capacity(n);
    let mut ranked: Vec<(Cost, usize)> = Vec::with_capacity(n);
    for i in 0..n {
        ranked.clear();
        for j in domains.iter(i) {
            let rc = reduced[(i, j)];
            if rc == crate::ap::UNAVAILABLE {
                return Err(PartitionError::MissingReducedCost { var: i, value: j });
            }
            ranked.push((rc, j));
        }
        if ranked.is_empty() {
            return Err(PartitionError::EmptyDomain(i));
        }
        ranked.sort_unstable();
        let keep = target.min(ranked.len());
        let cutoff = ranked[keep - 1].0;
        let mut cheapest_bad = None;
        for &(rc, j) in &ranked {
            if rc <= cutoff {
                good.insert(i, j);
            } else {
                bad.insert(i, j);
                cheapest_bad.get_or_insert(rc);
            }
        }
        min_bad.push(cheapest_bad);
    }
    let mut l_list: Vec<Cost> = min_bad.iter().map(|c| c.unwrap_or(SENTINEL)).collect();
    l_list.sort_unstable();
    let with_bad = min_bad.iter().filter(|c| c.is_some()).count();
    Ok(Partition {
        good,
        bad,
        min_bad,
        l_list,
        with_bad,
        ratio,
    })
}

/// `lb0 + L[1] + .. + L[k]`. Saturates at [`SENTINEL`] once `k` exceeds the number of
/// variables that have a bad set, since no such subproblem has a solution.
pub fn bound_for_discrepancy(lb0: Cost, part: &Partition, k: usize) -> Cost {
    if k > part.with_bad {
        return SENTINEL;
    }
    part.l_list[..k]
        .iter()
        .fold(lb0, |acc, &c| acc.saturating_add(c))
        .min(SENTINEL)
}
