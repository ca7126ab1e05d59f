use alloc::vec::Vec;

use crate::cost::Cost;

/// A Hamiltonian cycle given as a successor vector, with its cost.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tour {
    successors: Vec<usize>,
    cost: Cost,
}

impl Tour {
    pub fn new(successors: Vec<usize>, cost: Cost) -> Self {
        Self { successors, cost }
    }

    pub fn successors(&self) -> &[usize] {
        &self.successors
    }

    pub fn cost(&self) -> Cost {
        self.cost
    }
}
