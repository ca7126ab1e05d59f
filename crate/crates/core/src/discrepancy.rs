//! Subproblem generation in limited-discrepancy order.
//!
//! Level `k` holds the tours in which exactly `k` variables take a value from their bad
//! set. Each level is one branch-and-bound run with the discrepancy constraint posted,
//! and levels whose discrepancy bound reaches the incumbent are never searched.

use core::time::Duration;

use crate::ap::{Infeasible, UNAVAILABLE};
use crate::clock::Clock;
use crate::cost::{ceil_div, Cost, CostMatrix, SENTINEL};
use crate::instance::{Instance, ProblemKind};
use crate::lagrangean::{
    crude_upper_estimate, nearest_neighbor_tour, subgradient_optimize, LagrangeanState,
    SubgradientParams, SCALE,
};
use crate::model::Model;
use crate::partition::{bound_for_discrepancy, partition_domains, Partition, PartitionError};
use crate::subproblem::{
    propagate_alldiff, propagate_nocycle, propagate_time_windows, BoundCosts, DomainStore, Failure,
    Propagation, SideConstraint, SubproblemSolver,
};
use crate::tour::Tour;

/// Exactly `k` variables take their value in the bad part of their domain.
#[derive(Debug, Clone, Copy)]
pub struct DiscrepancyConstraint<'a> {
    k: usize,
    partition: &'a Partition,
}

/// Variables committed to one side of the partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Commitments {
    pub n_bad: usize,
    pub n_good: usize,
}

impl<'a> DiscrepancyConstraint<'a> {
    pub fn new(k: usize, partition: &'a Partition) -> Self {
        Self { k, partition }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// A variable is committed once its domain lies inside its good or its bad set.
    pub fn commitments(&self, store: &DomainStore) -> Commitments {
        let mut c = Commitments {
            n_bad: 0,
            n_good: 0,
        };
        for i in 0..store.n() {
            let d = store.domains();
            if d.row_subset_of(i, self.partition.good()) {
                c.n_good += 1;
            } else if d.row_subset_of(i, self.partition.bad()) {
                c.n_bad += 1;
            }
        }
        c
    }

    /// Count saturation: with `k` bad commitments the rest go good; with `n - k` good
    /// commitments the rest go bad.
    pub fn propagate(&self, store: &mut DomainStore) -> Propagation {
        let n = store.n();
        if self.k > n {
            return Err(Failure);
        }
        loop {
            let c = self.commitments(store);
            if c.n_bad > self.k || c.n_good > n - self.k {
                return Err(Failure);
            }
            let side = if c.n_bad == self.k {
                self.partition.good()
            } else if c.n_good == n - self.k {
                self.partition.bad()
            } else {
                return Ok(());
            };
            let mut changed = false;
            for i in 0..n {
                let d = store.domains();
                if d.row_subset_of(i, self.partition.good())
                    || d.row_subset_of(i, self.partition.bad())
                {
                    continue;
                }
                changed |= store.restrict(i, side)?;
            }
            if !changed {
                return Ok(());
            }
        }
    }
}

impl SideConstraint for DiscrepancyConstraint<'_> {
    fn propagate(&self, store: &mut DomainStore) -> Propagation {
        DiscrepancyConstraint::propagate(self, store)
    }

    fn accepts(&self, succ: &[usize]) -> bool {
        self.partition.discrepancy_of(succ) == self.k
    }
}

/// Posts the constraint for level `k` on the store and propagates it.
pub fn propagate_discrepancy(store: &mut DomainStore, part: &Partition, k: usize) -> Propagation {
    DiscrepancyConstraint::new(k, part).propagate(store)
}

/// Search options independent of any IO.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub ratio: f64,
    pub cuts: bool,
    pub sg_iters: usize,
    /// Stop after the level-0 subproblem.
    pub first_only: bool,
    pub max_k: Option<usize>,
    /// Prune levels with the discrepancy bound.
    pub theorem1: bool,
    /// Accept only tours of cost at most this value.
    pub ub: Option<Cost>,
    /// Bound interior nodes with the root multipliers instead of the plain assignment.
    pub lagrangean_nodes: bool,
}

impl SearchConfig {
    /// 0.075 for a TSP, 0.15 for a TSPTW.
    pub fn default_ratio(kind: ProblemKind) -> f64 {
        match kind {
            ProblemKind::Tsp => 0.075,
            ProblemKind::Tsptw => 0.15,
        }
    }

    pub fn for_kind(kind: ProblemKind) -> Self {
        Self {
            ratio: Self::default_ratio(kind),
            ..Self::default()
        }
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            ratio: 0.075,
            cuts: true,
            sg_iters: crate::lagrangean::DEFAULT_SUBGRADIENT_ITERATIONS,
            first_only: false,
            max_k: None,
            theorem1: true,
            ub: None,
            lagrangean_nodes: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchStats {
    pub fails: u64,
    pub nodes: u64,
    pub elapsed: Duration,
    /// Level at which the returned tour was found.
    pub opt_discrepancy: Option<usize>,
    /// First level that did not need to be searched, once optimality is established.
    pub proof_discrepancy: Option<usize>,
    /// Mean of `|good_i| / |D_i|`.
    pub first_subproblem_size: f64,
    /// Root bound, rounded up.
    pub root_bound: Cost,
    /// Root bound without cuts, rounded up.
    pub plain_root_bound: Cost,
    pub levels_searched: usize,
    /// The clock expired.
    pub incomplete: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The tour is optimal (or, with no tour, none exists under the bound).
    Optimal,
    /// Only the level-0 subproblem was searched.
    FirstSubproblem,
    /// The clock expired; the tour is the best found.
    TimeLimit,
    /// The relaxation has no solution, so neither does the instance.
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub tour: Option<Tour>,
    pub status: SolveStatus,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveError {
    Config(PartitionError),
}

impl core::fmt::Display for SolveError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SolveError::Config(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SolveError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            SolveError::Config(e) => Some(e),
        }
    }
}

impl From<PartitionError> for SolveError {
    fn from(e: PartitionError) -> Self {
        SolveError::Config(e)
    }
}

/// Everything computed once at the root: filtered domains, relaxation and partition.
#[derive(Debug, Clone)]
pub struct RootAnalysis {
    pub model: Model,
    pub store: DomainStore,
    pub relaxation: LagrangeanState,
    pub partition: Partition,
}

impl RootAnalysis {
    /// Root bound in fixed-point units.
    pub fn lb0(&self) -> Cost {
        self.relaxation.best_bound()
    }

    /// Discrepancy bound of level `k`, rounded up to the integer grid.
    pub fn level_bound(&self, k: usize) -> Cost {
        let b = bound_for_discrepancy(self.lb0(), &self.partition, k);
        if b >= SENTINEL {
            SENTINEL
        } else {
            ceil_div(b, SCALE)
        }
    }
}

/// Root propagation, relaxation and partitioning. `Ok(None)` means the instance is
/// infeasible at the root.
pub fn analyze_root(
    inst: &Instance,
    config: &SearchConfig,
) -> Result<Option<RootAnalysis>, SolveError> {
    if !(config.ratio > 0.0 && config.ratio <= 1.0) {
        return Err(PartitionError::InvalidRatio(config.ratio).into());
    }
    let model = Model::new(inst);
    let mut store = DomainStore::new(&model);
    if root_propagate(&mut store, &model).is_err() {
        return Ok(None);
    }
    let params = SubgradientParams {
        max_iterations: if config.cuts { config.sg_iters } else { 0 },
        upper_estimate: Some(upper_estimate(&model, &store)),
        ..SubgradientParams::default()
    };
    let relaxation = match subgradient_optimize(model.cost(), store.domains(), &params) {
        Ok(r) => r,
        Err(Infeasible) => return Ok(None),
    };
    let partition = partition_domains(
        &whole_units(relaxation.ap_at_best().reduced_matrix(), SCALE),
        store.domains(),
        config.ratio,
    )?;
    Ok(Some(RootAnalysis {
        model,
        store,
        relaxation,
        partition,
    }))
}

/// Reduced costs rounded down to whole cost units, kept in fixed-point scale. Costs are
/// integral, so the rounded values still bound the extra cost of any arc.
fn whole_units(reduced: &CostMatrix, scale: Cost) -> CostMatrix {
    let mut out = reduced.clone();
    for i in 0..out.n() {
        for j in 0..out.n() {
            let rc = out[(i, j)];
            if rc != UNAVAILABLE {
                out[(i, j)] = rc.div_euclid(scale) * scale;
            }
        }
    }
    out
}

fn root_propagate(store: &mut DomainStore, model: &Model) -> Propagation {
    loop {
        let before = store.changes();
        propagate_alldiff(store)?;
        propagate_nocycle(store)?;
        propagate_time_windows(store, model)?;
        if store.changes() == before {
            return Ok(());
        }
    }
}

/// Nearest-neighbor route for the subgradient step length; time-window aware for a
/// TSPTW, falling back to a crude overestimate.
fn upper_estimate(model: &Model, store: &DomainStore) -> Cost {
    let cost = model.cost();
    let domains = store.domains();
    let greedy = match (model.windows(), model.depot()) {
        (Some(windows), Some(depot)) => {
            let n = model.n();
            let mut visited = alloc::vec![false; n];
            visited[depot.start] = true;
            let mut node = depot.start;
            let mut t = windows[node].release;
            let mut total: Cost = 0;
            let mut ok = true;
            for step in 1..n {
                let last = step == n - 1;
                let next = domains
                    .iter(node)
                    .filter(|&j| !visited[j] && (last || j != depot.end))
                    .filter(|&j| t + cost[(node, j)] <= windows[j].deadline)
                    .min_by_key(|&j| ((t + cost[(node, j)]).max(windows[j].release), j));
                let Some(next) = next else {
                    ok = false;
                    break;
                };
                t = (t + cost[(node, next)]).max(windows[next].release);
                total += cost[(node, next)];
                visited[next] = true;
                node = next;
            }
            ok.then_some(total)
        }
        _ => nearest_neighbor_tour(cost, domains),
    };
    greedy.unwrap_or_else(|| crude_upper_estimate(cost, domains))
}

/// Runs levels `k = 0, 1, ..` until the discrepancy bound reaches the incumbent, the
/// levels run out, or the clock expires.
pub fn solve(
    inst: &Instance,
    config: &SearchConfig,
    clock: &dyn Clock,
) -> Result<SolveOutcome, SolveError> {
    let Some(root) = analyze_root(inst, config)? else {
        return Ok(SolveOutcome {
            tour: None,
            status: SolveStatus::Infeasible,
            stats: SearchStats {
                fails: 0,
                nodes: 0,
                elapsed: clock.elapsed(),
                opt_discrepancy: None,
                proof_discrepancy: None,
                first_subproblem_size: 0.0,
                root_bound: SENTINEL,
                plain_root_bound: SENTINEL,
                levels_searched: 0,
                incomplete: false,
            },
        });
    };
    Ok(search_levels(&root, config, clock))
}

/// The level loop over a prepared root.
pub fn search_levels(
    root: &RootAnalysis,
    config: &SearchConfig,
    clock: &dyn Clock,
) -> SolveOutcome {
    let n = root.model.n();
    let relaxation = &root.relaxation;
    let mut stats = SearchStats {
        fails: 0,
        nodes: 0,
        elapsed: Duration::ZERO,
        opt_discrepancy: None,
        proof_discrepancy: None,
        first_subproblem_size: root.partition.relative_size(),
        root_bound: relaxation.bound_ceil(),
        plain_root_bound: ceil_div(relaxation.plain_bound(), SCALE),
        levels_searched: 0,
        incomplete: false,
    };
    let bound_costs = if config.lagrangean_nodes {
        BoundCosts {
            cost: relaxation.modified_cost(),
            offset: relaxation.multiplier_sum(),
            scale: SCALE,
        }
    } else {
        BoundCosts::plain(&root.model)
    };

    // the search looks for tours strictly cheaper than `ub`
    let mut ub = config.ub.map_or(SENTINEL, |u| u.saturating_add(1));
    let mut incumbent: Option<Tour> = None;
    let last_level = n
        .min(root.partition.max_discrepancy())
        .min(config.max_k.unwrap_or(usize::MAX));
    let mut store = root.store.clone();
    let mut status = SolveStatus::Optimal;

    for k in 0..=last_level {
        if config.theorem1 && ub < SENTINEL && root.level_bound(k) >= ub {
            stats.proof_discrepancy = Some(k);
            break;
        }
        if clock.expired() {
            stats.incomplete = true;
            status = SolveStatus::TimeLimit;
            break;
        }
        let constraint = DiscrepancyConstraint::new(k, &root.partition);
        let out = SubproblemSolver::new(&root.model, bound_costs, clock)
            .with_side_constraint(&constraint)
            .run(&mut store, ub);
        stats.fails += out.fails;
        stats.nodes += out.nodes;
        stats.levels_searched += 1;
        if let Some(t) = out.best {
            ub = t.cost();
            incumbent = Some(t);
            stats.opt_discrepancy = Some(k);
        }
        if out.aborted {
            stats.incomplete = true;
            status = SolveStatus::TimeLimit;
            break;
        }
        if config.first_only {
            status = SolveStatus::FirstSubproblem;
            break;
        }
    }
    if status == SolveStatus::Optimal && stats.proof_discrepancy.is_none() {
        if config
            .max_k
            .is_some_and(|m| m < n.min(root.partition.max_discrepancy()))
        {
            // levels above max_k were skipped without a bound
            status = SolveStatus::FirstSubproblem;
        } else {
            stats.proof_discrepancy = Some(last_level + 1);
        }
    }
    stats.elapsed = clock.elapsed();
    SolveOutcome {
        tour: incumbent,
        status,
        stats,
    }
}
