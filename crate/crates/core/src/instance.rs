use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::cost::{Cost, CostMatrix, SENTINEL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Tsp,
    Tsptw,
}

/// Release time and deadline for the start of service at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeWindow {
    pub release: Cost,
    pub deadline: Cost,
}

impl TimeWindow {
    pub const fn new(release: Cost, deadline: Cost) -> Self {
        Self { release, deadline }
    }
}

/// Start depot and the copy of the depot that closes the route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Depot {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    TooSmall(usize),
    NegativeCost { from: usize, to: usize, cost: Cost },
    CostTooLarge { from: usize, to: usize, cost: Cost },
    WindowCount { expected: usize, found: usize },
    InvertedWindow { node: usize, window: TimeWindow },
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::TooSmall(n) => write!(f, "instance needs at least 2 nodes, got {n}"),
            InstanceError::NegativeCost { from, to, cost } => {
                write!(f, "negative cost {cost} on arc {from}->{to}")
            }
            InstanceError::CostTooLarge { from, to, cost } => {
                write!(
                    f,
                    "cost {cost} on arc {from}->{to} exceeds the supported range"
                )
            }
            InstanceError::WindowCount { expected, found } => {
                write!(f, "expected {expected} time windows, found {found}")
            }
            InstanceError::InvertedWindow { node, window } => write!(
                f,
                "time window of node {node} is inverted: [{}, {}]",
                window.release, window.deadline
            ),
        }
    }
}

impl core::error::Error for InstanceError {}

/// Largest arc cost accepted. Keeps fixed-point Lagrangean costs well inside `i64`.
pub const MAX_ARC_COST: Cost = 1 << 32;

/// A TSP or TSPTW instance over nodes `0..n`.
///
/// The diagonal of `cost` always holds [`SENTINEL`]. For a TSPTW the route starts at
/// `depot.start` and finishes at `depot.end`, a copy of the depot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: String,
    kind: ProblemKind,
    cost: CostMatrix,
    windows: Option<Vec<TimeWindow>>,
    depot: Option<Depot>,
}

impl Instance {
    pub fn tsp(name: impl Into<String>, cost: CostMatrix) -> Result<Self, InstanceError> {
        let cost = normalize(cost)?;
        Ok(Self {
            name: name.into(),
            kind: ProblemKind::Tsp,
            cost,
            windows: None,
            depot: None,
        })
    }

    /// Ascheuer convention: node 0 is the start depot, node `n-1` the end depot copy.
    pub fn tsptw(
        name: impl Into<String>,
        cost: CostMatrix,
        windows: Vec<TimeWindow>,
    ) -> Result<Self, InstanceError> {
        let cost = normalize(cost)?;
        let n = cost.n();
        if windows.len() != n {
            return Err(InstanceError::WindowCount {
                expected: n,
                found: windows.len(),
            });
        }
        if let Some((node, &window)) = windows
            .iter()
            .enumerate()
            .find(|(_, w)| w.release > w.deadline)
        {
            return Err(InstanceError::InvertedWindow { node, window });
        }
        Ok(Self {
            name: name.into(),
            kind: ProblemKind::Tsptw,
            cost,
            windows: Some(windows),
            depot: Some(Depot {
                start: 0,
                end: n - 1,
            }),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.cost.n()
    }

    pub fn cost(&self) -> &CostMatrix {
        &self.cost
    }

    #[inline]
    pub fn arc(&self, i: usize, j: usize) -> Cost {
        self.cost[(i, j)]
    }

    pub fn windows(&self) -> Option<&[TimeWindow]> {
        self.windows.as_deref()
    }

    pub fn depot(&self) -> Option<Depot> {
        self.depot
    }
}

fn normalize(mut cost: CostMatrix) -> Result<CostMatrix, InstanceError> {
    let n = cost.n();
    if n < 2 {
        return Err(InstanceError::TooSmall(n));
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                cost[(i, j)] = SENTINEL;
                continue;
            }
            let c = cost[(i, j)];
            if c < 0 {
                return Err(InstanceError::NegativeCost {
                    from: i,
                    to: j,
                    cost: c,
                });
            }
            if c > MAX_ARC_COST {
                return Err(InstanceError::CostTooLarge {
                    from: i,
                    to: j,
                    cost: c,
                });
            }
        }
    }
    Ok(cost)
}
