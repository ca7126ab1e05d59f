//! Exhaustive reference solvers for small instances.
//!
//! None of these touch the assignment solver, the propagators or the search, so they
//! can be used to check them.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cost::{Cost, CostMatrix};
use crate::domain::Domains;
use crate::instance::{Instance, ProblemKind};

pub const BRUTE_FORCE_AP_MAX: usize = 9;
pub const HELD_KARP_MAX: usize = 21;
pub const TSPTW_ENUMERATE_MAX: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleError {
    TooLarge {
        n: usize,
        max: usize,
    },
    WrongKind(ProblemKind),
    /// Tour values would not fit the compact table.
    CostRange,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { n, max } => {
                write!(f, "n = {n} exceeds the oracle limit of {max}")
            }
            OracleError::WrongKind(k) => write!(f, "oracle does not apply to {k:?} instances"),
            OracleError::CostRange => write!(f, "costs too large for the oracle"),
        }
    }
}

impl core::error::Error for OracleError {}

/// Minimum of `sum cost[i][p(i)]` over permutations `p` with `p(i)` in `D_i`; `None` when
/// no such permutation exists.
pub fn brute_force_ap(cost: &CostMatrix, domains: &Domains) -> Result<Option<Cost>, OracleError> {
    let n = cost.n();
    if n > BRUTE_FORCE_AP_MAX {
        return Err(OracleError::TooLarge {
            n,
            max: BRUTE_FORCE_AP_MAX,
        });
    }
    fn go(
        row: usize,
        used: u32,
        acc: Cost,
        cost: &CostMatrix,
        domains: &Domains,
        best: &mut Option<Cost>,
    ) {
        let n = cost.n();
        if row == n {
            if best.is_none_or(|b| acc < b) {
                *best = Some(acc);
            }
            return;
        }
        for j in 0..n {
            if used & (1 << j) == 0 && domains.contains(row, j) {
                go(
                    row + 1,
                    used | (1 << j),
                    acc + cost[(row, j)],
                    cost,
                    domains,
                    best,
                );
            }
        }
    }
    let mut best = None;
    go(0, 0, 0, cost, domains, &mut best);
    Ok(best)
}

/// Optimal tour value of a TSP by dynamic programming over subsets.
pub fn held_karp(inst: &Instance) -> Result<Cost, OracleError> {
    if inst.kind() != ProblemKind::Tsp {
        return Err(OracleError::WrongKind(inst.kind()));
    }
    let n = inst.n();
    if n > HELD_KARP_MAX {
        return Err(OracleError::TooLarge {
            n,
            max: HELD_KARP_MAX,
        });
    }
    let c = |i: usize, j: usize| inst.cost()[(i, j)];
    let max_arc = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| c(i, j))
        .max()
        .unwrap_or(0);
    const UNSET: u32 = u32::MAX;
    if max_arc.saturating_mul(n as Cost) >= UNSET as Cost {
        return Err(OracleError::CostRange);
    }
    // node 0 is the fixed start; node k >= 1 is bit k - 1
    let m = n - 1;
    let mut best = vec![UNSET; (1usize << m) * m];
    for k in 0..m {
        best[(1 << k) * m + k] = c(0, k + 1) as u32;
    }
    for set in 1usize..(1 << m) {
        for last in 0..m {
            let here = best[set * m + last];
            if set & (1 << last) == 0 || here == UNSET {
                continue;
            }
            for next in 0..m {
                if set & (1 << next) != 0 {
                    continue;
                }
                let slot = &mut best[(set | 1 << next) * m + next];
                let v = here + c(last + 1, next + 1) as u32;
                if v < *slot {
                    *slot = v;
                }
            }
        }
    }
    let full = (1usize << m) - 1;
    Ok((0..m)
        .map(|last| best[full * m + last] as Cost + c(last + 1, 0))
        .min()
        .expect("at least two nodes"))
}

/// Cheapest route from the start depot to the end depot visiting every node within its
/// window, waiting on early arrival. `None` when no order is feasible.
pub fn tsptw_enumerate(inst: &Instance) -> Result<Option<Cost>, OracleError> {
    let (Some(windows), Some(depot)) = (inst.windows(), inst.depot()) else {
        return Err(OracleError::WrongKind(inst.kind()));
    };
    let n = inst.n();
    if n > TSPTW_ENUMERATE_MAX {
        return Err(OracleError::TooLarge {
            n,
            max: TSPTW_ENUMERATE_MAX,
        });
    }
    let mut middle: Vec<usize> = (0..n)
        .filter(|&v| v != depot.start && v != depot.end)
        .collect();
    let mut best: Option<Cost> = None;
    permute(&mut middle, 0, &mut |order| {
        let mut at = depot.start;
        let mut t = windows[at].release;
        let mut total = 0;
        for &v in order.iter().chain(core::iter::once(&depot.end)) {
            let arc = inst.cost()[(at, v)];
            t = (t + arc).max(windows[v].release);
            if t > windows[v].deadline {
                return;
            }
            total += arc;
            at = v;
        }
        if best.is_none_or(|b| total < b) {
            best = Some(total);
        }
    });
    Ok(best)
}

fn permute(items: &mut [usize], from: usize, visit: &mut dyn FnMut(&[usize])) {
    if from == items.len() {
        visit(items);
        return;
    }
    for i in from..items.len() {
        items.swap(from, i);
        permute(items, from + 1, visit);
        items.swap(from, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::TimeWindow;

    #[test]
    fn ap_forced_anti_diagonal() {
        let c = CostMatrix::from_rows(&[vec![0, 3], vec![4, 0]]).unwrap();
        assert_eq!(brute_force_ap(&c, &Domains::complete(2)), Ok(Some(7)));
        let one = CostMatrix::filled(1, 5);
        assert_eq!(brute_force_ap(&one, &Domains::complete(1)), Ok(None));
    }

    #[test]
    fn ap_identity_zeros() {
        let mut c = CostMatrix::filled(4, 9);
        let mut d = Domains::complete(4);
        for i in 0..4 {
            c[(i, i)] = 0;
            d.insert(i, i);
        }
        assert_eq!(brute_force_ap(&c, &d), Ok(Some(0)));
    }

    #[test]
    fn held_karp_small() {
        let i = Instance::tsp("t", CostMatrix::filled(3, 1)).unwrap();
        assert_eq!(held_karp(&i), Ok(3));
        let rows = vec![
            vec![0, 1, 9, 4],
            vec![6, 0, 2, 9],
            vec![9, 8, 0, 3],
            vec![5, 9, 7, 0],
        ];
        let i = Instance::tsp("t", CostMatrix::from_rows(&rows).unwrap()).unwrap();
        // 0-1-2-3-0
        assert_eq!(held_karp(&i), Ok(11));
    }

    #[test]
    fn tsptw_forced_order() {
        let c = CostMatrix::filled(4, 1);
        let w = vec![
            TimeWindow::new(0, 0),
            TimeWindow::new(5, 5),
            TimeWindow::new(1, 2),
            TimeWindow::new(0, 100),
        ];
        let i = Instance::tsptw("t", c, w).unwrap();
        assert_eq!(tsptw_enumerate(&i), Ok(Some(3)));
        let w = vec![
            TimeWindow::new(0, 0),
            TimeWindow::new(0, 1),
            TimeWindow::new(0, 1),
            TimeWindow::new(0, 100),
        ];
        let i = Instance::tsptw("t", CostMatrix::filled(4, 1), w).unwrap();
        assert_eq!(tsptw_enumerate(&i), Ok(None));
    }

    #[test]
    fn refuses_large() {
        let i = Instance::tsp("t", CostMatrix::filled(22, 1)).unwrap();
        assert_eq!(held_karp(&i), Err(OracleError::TooLarge { n: 22, max: 21 }));
    }
}
