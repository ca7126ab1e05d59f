//! Per-variable value sets for the `Next` variables, stored as one bit row per variable.

use alloc::vec;
use alloc::vec::Vec;

const WORD: usize = 64;

/// `n` bit rows over `{0, .., n-1}`; row `i` is the domain of `Next_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domains {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Domains {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(WORD).max(1);
        Self {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    /// Every arc except self-loops.
    pub fn complete(n: usize) -> Self {
        let mut d = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    d.insert(i, j);
                }
            }
        }
        d
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / WORD] >> (j % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize, j: usize) -> bool {
        let w = &mut self.bits[i * self.words + j / WORD];
        let mask = 1u64 << (j % WORD);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, i: usize, j: usize) -> bool {
        let w = &mut self.bits[i * self.words + j / WORD];
        let mask = 1u64 << (j % WORD);
        let present = *w & mask != 0;
        *w &= !mask;
        present
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn len(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self, i: usize) -> bool {
        self.row(i).iter().all(|&w| w == 0)
    }

    /// The single value of row `i`, if the row is a singleton.
    pub fn single(&self, i: usize) -> Option<usize> {
        let mut found = None;
        for (k, &w) in self.row(i).iter().enumerate() {
            if w == 0 {
                continue;
            }
            if found.is_some() || w.count_ones() != 1 {
                return None;
            }
            found = Some(k * WORD + w.trailing_zeros() as usize);
        }
        found
    }

    pub fn iter(&self, i: usize) -> RowIter<'_> {
        RowIter {
            row: self.row(i),
            word: 0,
            current: self.row(i).first().copied().unwrap_or(0),
        }
    }

    /// Is row `i` of `self` a subset of row `i` of `other`?
    pub fn row_subset_of(&self, i: usize, other: &Domains) -> bool {
        self.row(i)
            .iter()
            .zip(other.row(i))
            .all(|(&a, &b)| a & !b == 0)
    }

    /// Does row `i` intersect row `i` of `other`?
    pub fn row_intersects(&self, i: usize, other: &Domains) -> bool {
        self.row(i)
            .iter()
            .zip(other.row(i))
            .any(|(&a, &b)| a & b != 0)
    }

    /// Total number of arcs.
    pub fn arc_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}

pub struct RowIter<'a> {
    row: &'a [u64],
    word: usize,
    current: u64,
}

impl Iterator for RowIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word * WORD + bit);
            }
            self.word += 1;
            if self.word >= self.row.len() {
                return None;
            }
            self.current = self.row[self.word];
        }
    }
}
