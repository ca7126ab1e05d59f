//! Exact TSP and TSPTW solving by limited discrepancy search over an assignment relaxation.
//!
//! The root relaxation (an assignment problem, optionally tightened with Lagrangean
//! subtour cuts) ranks every domain value by reduced cost. Domains are split into good
//! and bad values and subproblems are searched in order of how many bad values they
//! use, each by branch and bound. No allocation-free guarantees; `alloc` is required.

#![no_std]

extern crate alloc;

pub mod ap;
pub mod clock;
pub mod cost;
pub mod discrepancy;
pub mod domain;
pub mod instance;
pub mod lagrangean;
pub mod model;
pub mod oracle;
pub mod partition;
pub mod subproblem;
pub mod tour;

pub use ap::{resolve_incremental, solve_ap, ApResult, ApSolver, Infeasible};
pub use clock::{Clock, Unlimited};
pub use cost::{Cost, CostMatrix, SENTINEL};
pub use discrepancy::{solve, SearchConfig, SearchStats, SolveError, SolveOutcome, SolveStatus};
pub use domain::Domains;
pub use instance::{Depot, Instance, InstanceError, ProblemKind, TimeWindow};
pub use partition::{bound_for_discrepancy, partition_domains, Partition, PartitionError};
pub use tour::Tour;
