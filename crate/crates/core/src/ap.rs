//! Linear assignment problem over a masked cost matrix.
//!
//! Shortest augmenting paths with row/column potentials. A full solve is `O(n^3)`;
//! after arcs are removed from the domains only the rows that lost their assigned
//! column are re-augmented, `O(n^2)` each, starting from the previous duals (which
//! stay feasible on a shrunken arc set).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cost::{Cost, CostMatrix};
use crate::domain::Domains;

/// Marks reduced-cost entries of arcs outside the domains.
pub const UNAVAILABLE: Cost = Cost::MAX;

const NONE: usize = usize::MAX;
const INF: Cost = Cost::MAX;

/// No perfect matching exists on the available arcs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Infeasible;

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("no perfect matching on the available arcs")
    }
}

impl core::error::Error for Infeasible {}

/// Optimal assignment together with an optimal dual solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApResult {
    assignment: Vec<usize>,
    row_duals: Vec<Cost>,
    col_duals: Vec<Cost>,
    reduced: CostMatrix,
    lower_bound: Cost,
}

impl ApResult {
    /// `assignment()[i]` is the column matched to row `i`.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn row_duals(&self) -> &[Cost] {
        &self.row_duals
    }

    pub fn col_duals(&self) -> &[Cost] {
        &self.col_duals
    }

    /// Reduced costs, [`UNAVAILABLE`] outside the domains.
    pub fn reduced_matrix(&self) -> &CostMatrix {
        &self.reduced
    }

    #[inline]
    pub fn reduced(&self, i: usize, j: usize) -> Option<Cost> {
        match self.reduced[(i, j)] {
            UNAVAILABLE => None,
            c => Some(c),
        }
    }

    pub fn lower_bound(&self) -> Cost {
        self.lower_bound
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        extract_cycles(&self.assignment)
    }

    /// Is the assignment a single Hamiltonian cycle?
    pub fn is_tour(&self) -> bool {
        is_single_cycle(&self.assignment)
    }

    /// Checks dual feasibility, complementary slackness, bijectivity and that the bound
    /// equals the primal cost.
    pub fn certify(&self, cost: &CostMatrix, domains: &Domains) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        for (i, &j) in self.assignment.iter().enumerate() {
            if j >= n || seen[j] || !domains.contains(i, j) {
                return false;
            }
            seen[j] = true;
        }
        let mut primal: Cost = 0;
        for i in 0..n {
            primal += cost[(i, self.assignment[i])];
            for j in 0..n {
                let available = domains.contains(i, j);
                let rc = cost[(i, j)] - self.row_duals[i] - self.col_duals[j];
                if available != (self.reduced[(i, j)] != UNAVAILABLE) {
                    return false;
                }
                if available && (rc < 0 || rc != self.reduced[(i, j)]) {
                    return false;
                }
            }
            if self.reduced[(i, self.assignment[i])] != 0 {
                return false;
            }
        }
        let dual: Cost = self.row_duals.iter().sum::<Cost>() + self.col_duals.iter().sum::<Cost>();
        primal == dual && dual == self.lower_bound
    }
}

/// Reusable scratch space for assignment solves.
#[derive(Debug, Default, Clone)]
pub struct ApSolver {
    u: Vec<Cost>,
    v: Vec<Cost>,
    row_of_col: Vec<usize>,
    col_of_row: Vec<usize>,
    minv: Vec<Cost>,
    way: Vec<usize>,
    used: Vec<bool>,
}

impl ApSolver {
    pub fn new() -> Self {
        Self::default()
    }

    fn reset(&mut self, n: usize) {
        self.u.clear();
        self.u.resize(n, 0);
        self.v.clear();
        self.v.resize(n, 0);
        self.row_of_col.clear();
        self.row_of_col.resize(n, NONE);
        self.col_of_row.clear();
        self.col_of_row.resize(n, NONE);
        self.minv.resize(n, INF);
        self.way.resize(n, NONE);
        self.used.resize(n, false);
    }

    /// Solves from scratch.
    pub fn solve(&mut self, cost: &CostMatrix, domains: &Domains) -> Result<ApResult, Infeasible> {
        let n = cost.n();
        debug_assert_eq!(domains.n(), n);
        self.reset(n);
        if (0..n).any(|i| domains.is_empty(i)) {
            return Err(Infeasible);
        }
        // column reduction, then row reduction
        for j in 0..n {
            self.v[j] = INF;
        }
        for i in 0..n {
            for j in domains.iter(i) {
                self.v[j] = self.v[j].min(cost[(i, j)]);
            }
        }
        if self.v.contains(&INF) {
            return Err(Infeasible);
        }
        for i in 0..n {
            self.u[i] = domains
                .iter(i)
                .map(|j| cost[(i, j)] - self.v[j])
                .min()
                .unwrap_or(0);
        }
        for r in 0..n {
            self.augment(r, cost, domains)?;
        }
        Ok(self.result(cost, domains))
    }

    /// Re-optimizes `prev` after its domains shrank to `domains`. Only rows whose
    /// assigned column was removed are re-augmented.
    pub fn resolve(
        &mut self,
        cost: &CostMatrix,
        domains: &Domains,
        prev: &ApResult,
    ) -> Result<ApResult, Infeasible> {
        let n = cost.n();
        self.reset(n);
        self.u.copy_from_slice(&prev.row_duals);
        self.v.copy_from_slice(&prev.col_duals);
        let mut free = Vec::new();
        for (i, &j) in prev.assignment.iter().enumerate() {
            if domains.contains(i, j) {
                self.col_of_row[i] = j;
                self.row_of_col[j] = i;
            } else {
                free.push(i);
            }
        }
        for r in free {
            self.augment(r, cost, domains)?;
        }
        Ok(self.result(cost, domains))
    }

    fn augment(
        &mut self,
        r: usize,
        cost: &CostMatrix,
        domains: &Domains,
    ) -> Result<(), Infeasible> {
        let n = cost.n();
        self.minv.fill(INF);
        self.way.fill(NONE);
        self.used.fill(false);

        let mut i0 = r;
        // NONE stands for the virtual column matched to the free row
        let mut j0 = NONE;
        loop {
            let mut delta = INF;
            let mut j1 = NONE;
            let ui = self.u[i0];
            let row = cost.row(i0);
            for (j, &cij) in row.iter().enumerate() {
                if self.used[j] {
                    continue;
                }
                if domains.contains(i0, j) {
                    let cur = cij - ui - self.v[j];
                    if cur < self.minv[j] {
                        self.minv[j] = cur;
                        self.way[j] = j0;
                    }
                }
                if self.minv[j] < delta {
                    delta = self.minv[j];
                    j1 = j;
                }
            }
            if j1 == NONE {
                return Err(Infeasible);
            }
            self.u[r] += delta;
            for j in 0..n {
                if self.used[j] {
                    self.u[self.row_of_col[j]] += delta;
                    self.v[j] -= delta;
                } else if self.minv[j] != INF {
                    self.minv[j] -= delta;
                }
            }
            self.used[j1] = true;
            j0 = j1;
            match self.row_of_col[j1] {
                NONE => break,
                row => i0 = row,
            }
        }

        let mut j = j0;
        loop {
            let prev = self.way[j];
            if prev == NONE {
                self.row_of_col[j] = r;
                self.col_of_row[r] = j;
                break;
            }
            let rr = self.row_of_col[prev];
            self.row_of_col[j] = rr;
            self.col_of_row[rr] = j;
            j = prev;
        }
        Ok(())
    }

    fn result(&self, cost: &CostMatrix, domains: &Domains) -> ApResult {
        let n = cost.n();
        let reduced = CostMatrix::from_fn(n, |i, j| {
            if domains.contains(i, j) {
                cost[(i, j)] - self.u[i] - self.v[j]
            } else {
                UNAVAILABLE
            }
        });
        let lower_bound = self.u.iter().sum::<Cost>() + self.v.iter().sum::<Cost>();
        ApResult {
            assignment: self.col_of_row.clone(),
            row_duals: self.u.clone(),
            col_duals: self.v.clone(),
            reduced,
            lower_bound,
        }
    }
}

pub fn solve_ap(cost: &CostMatrix, domains: &Domains) -> Result<ApResult, Infeasible> {
    ApSolver::new().solve(cost, domains)
}

/// Re-solves `prev` (optimal for `domains`) after removing `removed` arcs.
pub fn resolve_incremental(
    cost: &CostMatrix,
    domains: &Domains,
    prev: &ApResult,
    removed: &[(usize, usize)],
) -> Result<ApResult, Infeasible> {
    let mut shrunk = domains.clone();
    for &(i, j) in removed {
        shrunk.remove(i, j);
    }
    ApSolver::new().resolve(cost, &shrunk, prev)
}

/// Orbits of a permutation, ordered by their smallest node; each starts at that node.
pub fn extract_cycles(assignment: &[usize]) -> Vec<Vec<usize>> {
    let n = assignment.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut node = start;
        while !seen[node] {
            seen[node] = true;
            cycle.push(node);
            node = assignment[node];
        }
        cycles.push(cycle);
    }
    cycles
}

pub(crate) fn is_single_cycle(succ: &[usize]) -> bool {
    let n = succ.len();
    if n == 0 {
        return false;
    }
    let mut node = 0;
    for step in 1..=n {
        node = succ[node];
        if node >= n {
            return false;
        }
        if node == 0 {
            return step == n;
        }
    }
    false
}
