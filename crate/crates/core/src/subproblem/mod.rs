//! Complete branch and bound over the `Next` variables of one subproblem.
//!
//! Every node runs the structural propagators to fixpoint, re-optimizes the assignment
//! bound incrementally, and filters arcs by reduced cost against the incumbent. Branching
//! is binary: `Next_i = j` first, then `Next_i != j`, with `i` the unbound variable with
//! the smallest domain and `j` its value of lowest reduced cost.

mod propagators;
mod store;

pub use propagators::{cost_filter, propagate_alldiff, propagate_nocycle, propagate_time_windows};
pub use store::{DomainStore, Failure, Propagation};

use crate::ap::{ApResult, ApSolver};
use crate::clock::{Clock, Unlimited};
use crate::cost::{ceil_div, Cost, CostMatrix, SENTINEL};
use crate::model::Model;
use crate::tour::Tour;
use propagators::{filter_scaled, prune_limit};

/// An extra constraint posted on a subproblem.
pub trait SideConstraint {
    fn propagate(&self, store: &mut DomainStore) -> Propagation;

    /// Does a complete successor vector satisfy the constraint?
    fn accepts(&self, succ: &[usize]) -> bool;
}

/// Costs the node bound is computed on. The bound of an assignment of value `z` is
/// `ceil((z + offset) / scale)`.
#[derive(Debug, Clone, Copy)]
pub struct BoundCosts<'a> {
    pub cost: &'a CostMatrix,
    pub offset: Cost,
    pub scale: Cost,
}

impl<'a> BoundCosts<'a> {
    /// The model's own arc costs.
    pub fn plain(model: &'a Model) -> Self {
        Self {
            cost: model.cost(),
            offset: 0,
            scale: 1,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct BnbOutcome {
    /// Cheapest feasible tour strictly below the initial upper bound.
    pub best: Option<Tour>,
    pub fails: u64,
    pub nodes: u64,
    /// The clock expired before the subproblem was exhausted.
    pub aborted: bool,
}

pub struct SubproblemSolver<'a> {
    model: &'a Model,
    bound: BoundCosts<'a>,
    side: Option<&'a dyn SideConstraint>,
    clock: &'a dyn Clock,
    ap: ApSolver,
    ub: Cost,
    out: BnbOutcome,
}

impl<'a> SubproblemSolver<'a> {
    pub fn new(model: &'a Model, bound: BoundCosts<'a>, clock: &'a dyn Clock) -> Self {
        Self {
            model,
            bound,
            side: None,
            clock,
            ap: ApSolver::new(),
            ub: SENTINEL,
            out: BnbOutcome::default(),
        }
    }

    pub fn with_side_constraint(mut self, side: &'a dyn SideConstraint) -> Self {
        self.side = Some(side);
        self
    }

    /// Searches for a tour cheaper than `ub`. The store is left as it was found.
    pub fn run(mut self, store: &mut DomainStore, ub: Cost) -> BnbOutcome {
        self.ub = ub;
        store.push_level();
        self.search(store);
        store.pop_level();
        self.out
    }

    fn structural(&self, store: &mut DomainStore) -> Propagation {
        loop {
            let before = store.changes();
            propagate_alldiff(store)?;
            propagate_nocycle(store)?;
            propagate_time_windows(store, self.model)?;
            if let Some(side) = self.side {
                side.propagate(store)?;
            }
            if store.changes() == before {
                return Ok(());
            }
        }
    }

    /// Propagates to fixpoint and returns the node's assignment solution, or `None` when
    /// the node fails or is bounded out.
    fn fixpoint(&mut self, store: &mut DomainStore, parent: Option<&ApResult>) -> Option<ApResult> {
        let mut current: Option<ApResult> = None;
        loop {
            self.structural(store).ok()?;
            let prev = current.as_ref().or(parent);
            let ap = match prev {
                Some(p) => self.ap.resolve(self.bound.cost, store.domains(), p),
                None => self.ap.solve(self.bound.cost, store.domains()),
            }
            .ok()?;
            if let Some(limit) = prune_limit(self.ub, self.bound.scale) {
                if ap.lower_bound() + self.bound.offset > limit {
                    return None;
                }
            }
            let before = store.changes();
            filter_scaled(store, &ap, self.bound.offset, self.bound.scale, self.ub).ok()?;
            if store.changes() == before {
                return Some(ap);
            }
            current = Some(ap);
        }
    }

    fn lower_bound(&self, ap: &ApResult) -> Cost {
        ceil_div(ap.lower_bound() + self.bound.offset, self.bound.scale)
    }

    /// Records the assignment if it is a feasible tour; returns true when it closes the node.
    fn try_assignment(&mut self, ap: &ApResult) -> bool {
        if !ap.is_tour() {
            return false;
        }
        let succ = ap.assignment();
        if !self.model.is_feasible(succ) || !self.side.is_none_or(|s| s.accepts(succ)) {
            return false;
        }
        let cost = self.model.tour_cost(succ);
        if cost < self.ub {
            self.ub = cost;
            self.out.best = Some(Tour::new(succ.to_vec(), cost));
        }
        cost <= self.lower_bound(ap)
    }

    fn select_variable(&self, store: &DomainStore) -> Option<usize> {
        (0..store.n())
            .filter(|&i| !store.is_bound(i))
            .min_by_key(|&i| (store.size(i), i))
    }

    fn search(&mut self, store: &mut DomainStore) {
        self.search_from(store, None);
    }

    fn search_from(&mut self, store: &mut DomainStore, parent: Option<&ApResult>) {
        self.out.nodes += 1;
        if self.clock.expired() {
            self.out.aborted = true;
            return;
        }
        let Some(mut ap) = self.fixpoint(store, parent) else {
            self.out.fails += 1;
            return;
        };
        loop {
            if self.try_assignment(&ap) {
                return;
            }
            let Some(var) = self.select_variable(store) else {
                // every variable bound but the tour was rejected
                self.out.fails += 1;
                return;
            };
            let value = store
                .domains()
                .iter(var)
                .min_by_key(|&j| (ap.reduced(var, j).unwrap_or(SENTINEL), j))
                .expect("unbound variable has values");

            store.push_level();
            if store.assign(var, value).is_ok() {
                self.search_from(store, Some(&ap));
            } else {
                self.out.fails += 1;
            }
            store.pop_level();
            if self.out.aborted {
                return;
            }

            self.out.nodes += 1;
            if store.remove(var, value).is_err() {
                self.out.fails += 1;
                return;
            }
            match self.fixpoint(store, Some(&ap)) {
                Some(next) => ap = next,
                None => {
                    self.out.fails += 1;
                    return;
                }
            }
        }
    }
}

/// Plain branch and bound on the store's domains with the model's own costs.
pub fn branch_and_bound(store: &mut DomainStore, model: &Model, ub: Cost) -> BnbOutcome {
    SubproblemSolver::new(model, BoundCosts::plain(model), &Unlimited).run(store, ub)
}
