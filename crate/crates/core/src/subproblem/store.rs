use alloc::vec::Vec;

use crate::cost::{Cost, SENTINEL};
use crate::domain::Domains;
use crate::model::Model;

/// A propagator emptied a domain or crossed a time bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Failure;

pub type Propagation = Result<(), Failure>;

#[derive(Debug, Clone, Copy)]
enum Undo {
    Word { index: usize, old: u64 },
    Earliest { node: usize, old: Cost },
    Latest { node: usize, old: Cost },
}

/// Backtrackable domains of the `Next` variables and service-start bounds `[est, lst]`.
#[derive(Debug, Clone)]
pub struct DomainStore {
    domains: Domains,
    earliest: Vec<Cost>,
    latest: Vec<Cost>,
    trail: Vec<Undo>,
    levels: Vec<usize>,
    changes: u64,
}

impl DomainStore {
    /// Root domains of the model and the time windows as initial bounds.
    pub fn new(model: &Model) -> Self {
        Self::with_domains(model, model.root_domains().clone())
    }

    pub fn with_domains(model: &Model, domains: Domains) -> Self {
        let n = model.n();
        let (earliest, latest) = match model.windows() {
            Some(w) => (
                w.iter().map(|w| w.release).collect(),
                w.iter().map(|w| w.deadline).collect(),
            ),
            None => (alloc::vec![0; n], alloc::vec![SENTINEL; n]),
        };
        Self {
            domains,
            earliest,
            latest,
            trail: Vec::new(),
            levels: Vec::new(),
            changes: 0,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.domains.n()
    }

    #[inline]
    pub fn domains(&self) -> &Domains {
        &self.domains
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.domains.contains(i, j)
    }

    pub fn size(&self, i: usize) -> usize {
        self.domains.len(i)
    }

    pub fn value(&self, i: usize) -> Option<usize> {
        self.domains.single(i)
    }

    pub fn is_bound(&self, i: usize) -> bool {
        self.domains.single(i).is_some()
    }

    pub fn earliest(&self, i: usize) -> Cost {
        self.earliest[i]
    }

    pub fn latest(&self, i: usize) -> Cost {
        self.latest[i]
    }

    /// Monotone counter bumped on every effective change.
    pub fn changes(&self) -> u64 {
        self.changes
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn push_level(&mut self) {
        self.levels.push(self.trail.len());
    }

    /// Undoes every change since the matching [`push_level`](Self::push_level).
    pub fn pop_level(&mut self) {
        let mark = self.levels.pop().expect("pop without push");
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Word { index, old } => {
                    let w = self.domains.words_per_row();
                    self.domains.row_mut(index / w)[index % w] = old;
                }
                Undo::Earliest { node, old } => self.earliest[node] = old,
                Undo::Latest { node, old } => self.latest[node] = old,
            }
        }
        self.changes += 1;
    }

    fn save_word(&mut self, i: usize, word: usize) {
        let w = self.domains.words_per_row();
        let old = self.domains.row(i)[word];
        self.trail.push(Undo::Word {
            index: i * w + word,
            old,
        });
    }

    /// Removes `j` from `D_i`. Fails when the domain becomes empty.
    pub fn remove(&mut self, i: usize, j: usize) -> Result<bool, Failure> {
        if !self.domains.contains(i, j) {
            return Ok(false);
        }
        self.save_word(i, j / 64);
        self.domains.remove(i, j);
        self.changes += 1;
        if self.domains.is_empty(i) {
            return Err(Failure);
        }
        Ok(true)
    }

    /// Binds `Next_i = j`.
    pub fn assign(&mut self, i: usize, j: usize) -> Result<bool, Failure> {
        if !self.domains.contains(i, j) {
            return Err(Failure);
        }
        let words = self.domains.words_per_row();
        let mut changed = false;
        for k in 0..words {
            let keep = if j / 64 == k { 1u64 << (j % 64) } else { 0 };
            let old = self.domains.row(i)[k];
            if old != keep {
                self.save_word(i, k);
                self.domains.row_mut(i)[k] = keep;
                changed = true;
            }
        }
        if changed {
            self.changes += 1;
        }
        Ok(changed)
    }

    /// Intersects `D_i` with row `i` of `mask`.
    pub fn restrict(&mut self, i: usize, mask: &Domains) -> Result<bool, Failure> {
        let words = self.domains.words_per_row();
        let mut changed = false;
        for k in 0..words {
            let old = self.domains.row(i)[k];
            let new = old & mask.row(i)[k];
            if new != old {
                self.save_word(i, k);
                self.domains.row_mut(i)[k] = new;
                changed = true;
            }
        }
        if changed {
            self.changes += 1;
            if self.domains.is_empty(i) {
                return Err(Failure);
            }
        }
        Ok(changed)
    }

    pub fn raise_earliest(&mut self, i: usize, t: Cost) -> Result<bool, Failure> {
        if t <= self.earliest[i] {
            return Ok(false);
        }
        self.trail.push(Undo::Earliest {
            node: i,
            old: self.earliest[i],
        });
        self.earliest[i] = t;
        self.changes += 1;
        if t > self.latest[i] {
            return Err(Failure);
        }
        Ok(true)
    }

    pub fn lower_latest(&mut self, i: usize, t: Cost) -> Result<bool, Failure> {
        if t >= self.latest[i] {
            return Ok(false);
        }
        self.trail.push(Undo::Latest {
            node: i,
            old: self.latest[i],
        });
        self.latest[i] = t;
        self.changes += 1;
        if t < self.earliest[i] {
            return Err(Failure);
        }
        Ok(true)
    }

    /// Successor vector when every variable is bound.
    pub fn solution(&self) -> Option<Vec<usize>> {
        (0..self.n()).map(|i| self.value(i)).collect()
    }
}
