//! Assignment bound strengthened with subtour elimination cuts whose multipliers are
//! moved into the arc costs, so every iterate is still an assignment problem.
//!
//! Costs are fixed-point with [`SCALE`] units per cost unit; multipliers live on the same
//! grid, which keeps every assignment solve exact. For any tour `T` and any `λ >= 0`,
//! `cost(T) >= AP(c - λ-penalties) + Σ λ_S`, so each iterate is a valid bound.

use alloc::vec;
use alloc::vec::Vec;

use crate::ap::{ApResult, ApSolver, Infeasible};
use crate::cost::{ceil_div, Cost, CostMatrix};
use crate::domain::Domains;

/// Fixed-point units per unit of arc cost.
pub const SCALE: Cost = 1 << 16;

pub const DEFAULT_SUBGRADIENT_ITERATIONS: usize = 1000;

/// Step factor below which the ascent stops.
const MIN_STEP: f64 = 1e-4;

/// A subtour elimination cut over `nodes` with its scaled multiplier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    nodes: Vec<usize>,
    members: Vec<bool>,
    multiplier: Cost,
}

impl Cut {
    /// `nodes` must be a nonempty proper subset of `0..n`.
    pub fn new(n: usize, mut nodes: Vec<usize>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        assert!(
            !nodes.is_empty() && nodes.len() < n,
            "cut must be a proper nonempty subset"
        );
        let mut members = vec![false; n];
        for &v in &nodes {
            members[v] = true;
        }
        Self {
            nodes,
            members,
            multiplier: 0,
        }
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.members[v]
    }

    /// Multiplier in fixed-point units.
    pub fn multiplier(&self) -> Cost {
        self.multiplier
    }

    pub fn multiplier_value(&self) -> f64 {
        self.multiplier as f64 / SCALE as f64
    }

    /// Arcs of `succ` leaving the node set.
    pub fn crossings(&self, succ: &[usize]) -> usize {
        self.nodes
            .iter()
            .filter(|&&i| !self.members[succ[i]])
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubgradientParams {
    pub max_iterations: usize,
    /// Initial step factor, halved after `patience` non-improving iterations.
    pub initial_step: f64,
    pub patience: usize,
    /// Upper-bound estimate for the step length; a nearest-neighbor tour when absent.
    pub upper_estimate: Option<Cost>,
}

impl Default for SubgradientParams {
    fn default() -> Self {
        Self {
            max_iterations: DEFAULT_SUBGRADIENT_ITERATIONS,
            initial_step: 2.0,
            patience: 20,
            upper_estimate: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LagrangeanState {
    cuts: Vec<Cut>,
    modified_cost: CostMatrix,
    best_bound: Cost,
    plain_bound: Cost,
    ap_at_best: ApResult,
    iterations: usize,
}

impl LagrangeanState {
    /// Cuts with the multipliers of the best iterate.
    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    /// Scaled costs with the best iterate's penalties applied; zero outside the domains.
    pub fn modified_cost(&self) -> &CostMatrix {
        &self.modified_cost
    }

    /// Best bound in fixed-point units.
    pub fn best_bound(&self) -> Cost {
        self.best_bound
    }

    /// Assignment bound without cuts, fixed-point.
    pub fn plain_bound(&self) -> Cost {
        self.plain_bound
    }

    /// Smallest integer tour cost compatible with the bound.
    pub fn bound_ceil(&self) -> Cost {
        ceil_div(self.best_bound, SCALE)
    }

    pub fn ap_at_best(&self) -> &ApResult {
        &self.ap_at_best
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn multiplier_sum(&self) -> Cost {
        self.cuts.iter().map(|c| c.multiplier).sum()
    }

    pub fn scale(&self) -> Cost {
        SCALE
    }
}

/// One cut per cycle of the assignment that is not Hamiltonian.
pub fn separate_subtours(ap: &ApResult) -> Vec<Cut> {
    let n = ap.n();
    let cycles = ap.cycles();
    if cycles.len() <= 1 {
        return Vec::new();
    }
    cycles.into_iter().map(|c| Cut::new(n, c)).collect()
}

pub(crate) fn scaled_costs(cost: &CostMatrix, domains: &Domains, cuts: &[Cut]) -> CostMatrix {
    let n = cost.n();
    let mut m = CostMatrix::from_fn(n, |i, j| {
        if domains.contains(i, j) {
            cost[(i, j)] * SCALE
        } else {
            0
        }
    });
    for cut in cuts.iter().filter(|c| c.multiplier > 0) {
        for &i in &cut.nodes {
            for j in domains.iter(i) {
                if !cut.members[j] {
                    m[(i, j)] -= cut.multiplier;
                }
            }
        }
    }
    m
}

/// Greedy nearest-neighbor tour from node 0 over the domains, if one closes.
pub fn nearest_neighbor_tour(cost: &CostMatrix, domains: &Domains) -> Option<Cost> {
    let n = cost.n();
    let mut visited = vec![false; n];
    visited[0] = true;
    let mut node = 0;
    let mut total = 0;
    for step in 1..n {
        let last = step == n - 1;
        let next = domains
            .iter(node)
            .filter(|&j| !visited[j])
            .filter(|&j| last || domains.iter(j).any(|k| !visited[k] && k != j))
            .min_by_key(|&j| (cost[(node, j)], j))?;
        total += cost[(node, next)];
        visited[next] = true;
        node = next;
    }
    domains.contains(node, 0).then(|| total + cost[(node, 0)])
}

/// Largest available arc cost times `n`: an overestimate of every tour.
pub fn crude_upper_estimate(cost: &CostMatrix, domains: &Domains) -> Cost {
    let n = cost.n();
    let max = (0..n)
        .flat_map(|i| domains.iter(i).map(move |j| (i, j)))
        .map(|(i, j)| cost[(i, j)])
        .max()
        .unwrap_or(0);
    max * n as Cost
}

fn round_to_cost(x: f64) -> Cost {
    if x >= 0.0 {
        (x + 0.5) as Cost
    } else {
        -((-x + 0.5) as Cost)
    }
}

/// Subgradient ascent on the cut multipliers.
///
/// Iterate 0 is the plain assignment problem; with `max_iterations == 0` nothing else
/// happens. New cuts are separated from every iterate's assignment and kept in the pool.
pub fn subgradient_optimize(
    cost: &CostMatrix,
    domains: &Domains,
    params: &SubgradientParams,
) -> Result<LagrangeanState, Infeasible> {
    let mut solver = ApSolver::new();
    let upper = params
        .upper_estimate
        .or_else(|| nearest_neighbor_tour(cost, domains))
        .unwrap_or_else(|| crude_upper_estimate(cost, domains));
    let upper_scaled = upper.saturating_mul(SCALE);

    let mut pool: Vec<Cut> = Vec::new();
    let mut modified = scaled_costs(cost, domains, &pool);
    let mut ap = solver.solve(&modified, domains)?;
    let plain_bound = ap.lower_bound();
    let mut best = LagrangeanState {
        cuts: Vec::new(),
        modified_cost: modified.clone(),
        best_bound: plain_bound,
        plain_bound,
        ap_at_best: ap.clone(),
        iterations: 0,
    };

    let mut step = params.initial_step;
    let mut stale = 0;
    let mut iterations = 0;
    while iterations < params.max_iterations {
        for cut in separate_subtours(&ap) {
            if !pool.iter().any(|c| c.nodes == cut.nodes) {
                pool.push(cut);
            }
        }
        let value = ap.lower_bound() + pool.iter().map(|c| c.multiplier).sum::<Cost>();
        let gradient: Vec<i64> = pool
            .iter()
            .map(|c| 1 - c.crossings(ap.assignment()) as i64)
            .collect();
        let norm: i64 = gradient.iter().map(|g| g * g).sum();
        if norm == 0 || value >= upper_scaled {
            break;
        }
        let t = step * (upper_scaled - value) as f64 / norm as f64;
        for (cut, &g) in pool.iter_mut().zip(&gradient) {
            cut.multiplier = (cut.multiplier + round_to_cost(t * g as f64)).max(0);
        }
        iterations += 1;

        modified = scaled_costs(cost, domains, &pool);
        ap = solver.solve(&modified, domains)?;
        let value = ap.lower_bound() + pool.iter().map(|c| c.multiplier).sum::<Cost>();
        if value > best.best_bound {
            best.best_bound = value;
            best.cuts = pool.clone();
            best.modified_cost = modified.clone();
            best.ap_at_best = ap.clone();
            stale = 0;
        } else {
            stale += 1;
            if stale >= params.patience {
                step /= 2.0;
                stale = 0;
                if step < MIN_STEP {
                    break;
                }
            }
        }
    }
    best.iterations = iterations;
    debug_assert!(best.best_bound >= plain_bound);
    Ok(best)
}
