//! Incremental sparse row echelon form over Q.
//!
//! Vectors are sparse maps from an ordered coordinate key to a nonzero rational.
//! Every stored row remembers how it was combined from the inserted vectors, so
//! the span can return exact witnesses for membership and a kernel basis for the
//! inserted family.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::rational::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

/// A linear combination of inserted vectors, indexed by insertion order.
pub type Combination = BTreeMap<usize, Rational>;

/// `target += factor * source`, dropping entries that cancel.
pub fn axpy<K: Ord + Clone>(target: &mut SparseVec<K>, factor: &Rational, source: &SparseVec<K>) {
    for (k, v) in source {
        let delta = factor * v;
        match target.entry(k.clone()) {
            Entry::Vacant(e) => {
                e.insert(delta);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += delta;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Row<K> {
    vec: SparseVec<K>,
    combo: Combination,
}

/// Outcome of inserting a vector.
#[derive(Clone, Debug, PartialEq)]
pub enum Insertion {
    /// The vector enlarged the span.
    Independent,
    /// The vector was dependent; the combination of inserted vectors sums to zero
    /// and gives the new vector coefficient one.
    Dependent(Combination),
}

#[derive(Clone, Debug)]
pub struct EchelonSpan<K: Ord + Clone> {
    pivots: BTreeMap<K, Row<K>>,
    inserted: usize,
    track: bool,
}

impl<K: Ord + Clone> Default for EchelonSpan<K> {
    fn default() -> Self {
        Self::new(true)
    }
}

impl<K: Ord + Clone> EchelonSpan<K> {
    /// With `track` unset, combinations are not recorded (faster, no witnesses).
    pub fn new(track: bool) -> Self {
        EchelonSpan { pivots: BTreeMap::new(), inserted: 0, track }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn pivot_keys(&self) -> impl Iterator<Item = &K> {
        self.pivots.keys()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.pivots.contains_key(k)
    }

    fn eliminate(&self, v: &mut SparseVec<K>, combo: &mut Combination, sign: &Rational) {
        let mut bound: Option<K> = None;
        loop {
            let lead = match &bound {
                None => v.iter().next_back(),
                Some(b) => v.range(..b.clone()).next_back(),
            };
            let Some((k, c)) = lead else { break };
            match self.pivots.get(k) {
                Some(row) => {
                    let factor = -c.clone();
                    axpy(v, &factor, &row.vec);
                    if self.track {
                        axpy(combo, &(&factor * sign), &row.combo);
                    }
                }
                None => {
                    // Keep reducing the lower coordinates so the remainder is canonical.
                    bound = Some(k.clone());
                }
            }
        }
    }

    /// Inserts a vector and reports whether it was independent of the earlier ones.
    pub fn insert(&mut self, mut v: SparseVec<K>) -> Insertion {
        let idx = self.inserted;
        self.inserted += 1;
        let mut combo = Combination::new();
        if self.track {
            combo.insert(idx, Rational::one());
        }
        self.eliminate(&mut v, &mut combo, &Rational::one());
        match v.iter().next_back() {
            None => Insertion::Dependent(combo),
            Some((k, c)) => {
                let k = k.clone();
                let inv = Rational::one() / c;
                for x in v.values_mut() {
                    *x *= &inv;
                }
                for x in combo.values_mut() {
                    *x *= &inv;
                }
                let row = Row { vec: v, combo };
                self.pivots.insert(k, row);
                Insertion::Independent
            }
        }
    }

    /// Reduces `v` against the span. Returns the canonical remainder and a
    /// combination `c` with `v = remainder + sum_i c_i v_i`.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, Combination) {
        let mut r = v.clone();
        let mut combo = Combination::new();
        self.eliminate(&mut r, &mut combo, &-Rational::one());
        (r, combo)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// The stored basis rows, in echelon form.
    pub fn basis(&self) -> Vec<SparseVec<K>> {
        self.pivots.values().map(|r| r.vec.clone()).collect()
    }
}

/// Applies a combination to a family of vectors.
pub fn combine<K: Ord + Clone>(family: &[SparseVec<K>], combo: &Combination) -> SparseVec<K> {
    let mut out = SparseVec::new();
    for (&i, c) in combo {
        axpy(&mut out, c, &family[i]);
    }
    out
}
