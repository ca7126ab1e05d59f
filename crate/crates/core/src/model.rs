//! The `Next`-variable model shared by the relaxation and the search.
//!
//! A TSPTW route from the start depot to the end depot is modeled as a tour by fixing
//! `Next_end = start` at zero cost.

use alloc::vec;
use alloc::vec::Vec;

use crate::ap::is_single_cycle;
use crate::cost::{Cost, CostMatrix};
use crate::domain::Domains;
use crate::instance::{Depot, Instance, ProblemKind, TimeWindow};

#[derive(Debug, Clone)]
pub struct Model {
    kind: ProblemKind,
    cost: CostMatrix,
    windows: Option<Vec<TimeWindow>>,
    depot: Option<Depot>,
    root: Domains,
}

impl Model {
    pub fn new(inst: &Instance) -> Self {
        let n = inst.n();
        let mut cost = inst.cost().clone();
        let mut root = Domains::complete(n);
        if let Some(Depot { start, end }) = inst.depot() {
            cost[(end, start)] = 0;
            for j in 0..n {
                if j != start {
                    root.remove(end, j);
                }
            }
            for i in 0..n {
                if i != end {
                    root.remove(i, start);
                }
            }
            if n > 2 {
                root.remove(start, end);
            }
        }
        Self {
            kind: inst.kind(),
            cost,
            windows: inst.windows().map(<[TimeWindow]>::to_vec),
            depot: inst.depot(),
            root,
        }
    }

    pub fn n(&self) -> usize {
        self.cost.n()
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    /// Arc costs of the tour model (the closing `end -> start` arc is free).
    pub fn cost(&self) -> &CostMatrix {
        &self.cost
    }

    pub fn windows(&self) -> Option<&[TimeWindow]> {
        self.windows.as_deref()
    }

    pub fn depot(&self) -> Option<Depot> {
        self.depot
    }

    /// Arc set before any propagation.
    pub fn root_domains(&self) -> &Domains {
        &self.root
    }

    /// Is `(i, j)` the closing arc that carries no travel time?
    #[inline]
    pub fn is_wrap_arc(&self, i: usize, j: usize) -> bool {
        matches!(self.depot, Some(d) if d.end == i && d.start == j)
    }

    pub fn tour_cost(&self, succ: &[usize]) -> Cost {
        succ.iter()
            .enumerate()
            .map(|(i, &j)| self.cost[(i, j)])
            .sum()
    }

    /// Is `succ` a Hamiltonian cycle using root arcs that meets every time window?
    pub fn is_feasible(&self, succ: &[usize]) -> bool {
        succ.len() == self.n()
            && succ
                .iter()
                .enumerate()
                .all(|(i, &j)| j < self.n() && self.root.contains(i, j))
            && is_single_cycle(succ)
            && self.schedule(succ).is_some()
    }

    /// Service start times along the route, or `None` if a deadline is missed.
    /// Without windows every node starts at time 0.
    pub fn schedule(&self, succ: &[usize]) -> Option<Vec<Cost>> {
        let n = self.n();
        let (Some(windows), Some(depot)) = (&self.windows, self.depot) else {
            return Some(vec![0; n]);
        };
        let mut start = vec![0; n];
        let mut node = depot.start;
        let mut t = windows[node].release;
        start[node] = t;
        for _ in 1..n {
            let next = succ[node];
            t = (t + self.cost[(node, next)]).max(windows[next].release);
            if t > windows[next].deadline {
                return None;
            }
            start[next] = t;
            node = next;
        }
        Some(start)
    }

    /// Nodes in visiting order, beginning at the start depot (node 0 for a TSP).
    pub fn route(&self, succ: &[usize]) -> Vec<usize> {
        let first = self.depot.map_or(0, |d| d.start);
        let mut order = Vec::with_capacity(succ.len());
        let mut node = first;
        for _ in 0..succ.len() {
            order.push(node);
            node = succ[node];
        }
        order
    }
}
