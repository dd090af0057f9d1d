use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::rational::{floor_i64, Rational};
use super::ExactAlgError;

/// Positive rational weights for the coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(weights: Vec<Rational>) -> Result<Self, ExactAlgError> {
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(ExactAlgError::NonPositiveWeight);
        }
        Ok(WeightVector(weights))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    /// The sum `|w|` of all weights.
    pub fn total(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn max(&self) -> Rational {
        self.0.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self, m: &Monomial) -> Result<Rational, ExactAlgError> {
        if m.dim() != self.dim() {
            return Err(ExactAlgError::DimensionMismatch { expected: self.dim(), found: m.dim() });
        }
        Ok(weighted_degree_unchecked(m, self))
    }
}

pub(crate) fn weighted_degree_unchecked(m: &Monomial, w: &WeightVector) -> Rational {
    m.0.iter()
        .zip(&w.0)
        .fold(Rational::zero(), |acc, (&e, wi)| acc + wi * Rational::from_integer(e.into()))
}

/// `sum_i beta_i w_i`.
pub fn weighted_degree(m: &Monomial, w: &WeightVector) -> Result<Rational, ExactAlgError> {
    w.degree(m)
}

/// Monomial ideal stored by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    dim: usize,
    generators: BTreeSet<Monomial>,
}

impl MonomialIdeal {
    pub fn new(dim: usize, gens: impl IntoIterator<Item = Monomial>) -> Self {
        let mut all: Vec<Monomial> = gens.into_iter().collect();
        all.sort();
        all.dedup();
        let mut minimal: BTreeSet<Monomial> = BTreeSet::new();
        for m in all {
            if !minimal.iter().any(|g| g.divides(&m)) {
                minimal.insert(m);
            }
        }
        MonomialIdeal { dim, generators: minimal }
    }

    pub fn unit(dim: usize) -> Self {
        Self::new(dim, [Monomial::one(dim)])
    }

    pub fn zero(dim: usize) -> Self {
        MonomialIdeal { dim, generators: BTreeSet::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &BTreeSet<Monomial> {
        &self.generators
    }

    pub fn generator_polys(&self) -> Vec<Polynomial> {
        self.generators.iter().cloned().map(Polynomial::monomial).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(Monomial::is_one)
    }

    pub fn contains_monomial(&self, m: &Monomial) -> bool {
        self.generators.iter().any(|g| g.divides(m))
    }

    /// Membership of a polynomial: every term must lie in the ideal.
    pub fn contains_poly(&self, p: &Polynomial) -> bool {
        p.terms().keys().all(|m| self.contains_monomial(m))
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &MonomialIdeal) -> bool {
        self.generators.iter().all(|g| other.contains_monomial(g))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        MonomialIdeal::new(self.dim, self.generators.iter().chain(&other.generators).cloned())
    }

    pub fn product(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut gens = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                gens.push(a.mul(b));
            }
        }
        MonomialIdeal::new(self.dim, gens)
    }

    pub fn scale(&self, m: &Monomial) -> MonomialIdeal {
        MonomialIdeal::new(self.dim, self.generators.iter().map(|g| g.mul(m)))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

/// The ideal spanned by monomials of weighted degree `> gamma` (strict) or `>= gamma`.
pub fn graded_ideal(w: &WeightVector, gamma: &Rational, strict: bool) -> MonomialIdeal {
    let dim = w.dim();
    let accept = |d: &Rational| if strict { d > gamma } else { d >= gamma };
    if accept(&Rational::zero()) {
        return MonomialIdeal::unit(dim);
    }
    // Minimal generators have degree at most gamma + max weight.
    let cap = gamma + w.max();
    let bounds: Vec<u32> = w.weights().iter().map(|wi| floor_i64(&(&cap / wi)).max(0) as u32).collect();
    let mut gens = Vec::new();
    let mut cur = alloc::vec![0u32; dim];
    enumerate_box(&bounds, 0, &mut cur, &mut |e| {
        let m = Monomial(e.to_vec());
        let d = weighted_degree_unchecked(&m, w);
        if accept(&d) && d <= cap {
            gens.push(m);
        }
    });
    MonomialIdeal::new(dim, gens)
}

fn enumerate_box(bounds: &[u32], i: usize, cur: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    if i == bounds.len() {
        visit(cur);
        return;
    }
    for e in 0..=bounds[i] {
        cur[i] = e;
        enumerate_box(bounds, i + 1, cur, visit);
    }
    cur[i] = 0;
}
