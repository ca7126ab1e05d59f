use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

/// Integral arc cost.
pub type Cost = i64;

/// Stand-in for an infinite cost. Two sentinels can be added without overflow.
pub const SENTINEL: Cost = Cost::MAX / 4;

/// Dense row-major `n x n` matrix of costs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CostMatrix {
    n: usize,
    data: Vec<Cost>,
}

impl CostMatrix {
    pub fn filled(n: usize, value: Cost) -> Self {
        Self {
            n,
            data: vec![value; n * n],
        }
    }

    /// Builds a matrix from `n` rows of length `n`. Returns `None` on a ragged input.
    pub fn from_rows(rows: &[Vec<Cost>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Cost) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Cost] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Cost]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

impl Index<(usize, usize)> for CostMatrix {
    type Output = Cost;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cost {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CostMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cost {
        &mut self.data[i * self.n + j]
    }
}

/// `ceil(value / scale)` for a positive scale.
#[inline]
pub fn ceil_div(value: Cost, scale: Cost) -> Cost {
    debug_assert!(scale > 0);
    let q = value.div_euclid(scale);
    if value.rem_euclid(scale) == 0 {
        q
    } else {
        q + 1
    }
}
