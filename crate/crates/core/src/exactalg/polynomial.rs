use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::rational::{int, Rational};
use super::ExactAlgError;

/// Multivariate polynomial over Q in `x1..xn`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::term(c, Monomial::one(dim))
    }

    pub fn var(dim: usize, i: usize) -> Self {
        Self::term(Rational::one(), Monomial::var(dim, i))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(Rational::one(), m)
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Polynomial::zero(m.dim());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero(dim);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.dim))
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.dim(), self.dim);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.dim);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut k = m.clone();
            k.0[i] -= 1;
            out.add_term(k, c * int(e as i64));
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.dim);
        while let Some((m, c)) = rem.leading() {
            let t = m.div(&lm)?;
            let q = c / &lc;
            rem = rem.sub(&divisor.mul_monomial(&t).scale(&q));
            quot.add_term(t, q);
        }
        Some(quot)
    }

    /// Largest `k` with `divisor^k | self`, together with the quotient.
    pub fn strip_factor(&self, divisor: &Polynomial) -> (u32, Polynomial) {
        let mut k = 0;
        let mut cur = self.clone();
        if cur.is_zero() || divisor.total_degree().unwrap_or(0) == 0 {
            return (0, cur);
        }
        while let Some(q) = cur.exact_div(divisor) {
            cur = q;
            k += 1;
        }
        (k, cur)
    }

    /// Re-embeds into `new_dim` variables, keeping the first `min(dim, new_dim)` exponents.
    /// Terms that use dropped variables must not exist.
    pub fn embed(&self, new_dim: usize) -> Polynomial {
        let mut out = Polynomial::zero(new_dim);
        for (m, c) in &self.terms {
            let mut e = alloc::vec![0; new_dim];
            for (i, &x) in m.0.iter().enumerate() {
                if i < new_dim {
                    e[i] = x;
                } else {
                    debug_assert_eq!(x, 0);
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Substitutes the value `v` for variable `i`, keeping the dimension.
    pub fn substitute(&self, i: usize, v: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            let mut k = m.clone();
            let e = core::mem::replace(&mut k.0[i], 0);
            let mut factor = Rational::one();
            for _ in 0..e {
                factor *= v;
            }
            out.add_term(k, c * factor);
        }
        out
    }

    /// Maximal exponent of each variable.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut out = alloc::vec![0; self.dim];
        for m in self.terms.keys() {
            for (o, &e) in out.iter_mut().zip(&m.0) {
                *o = (*o).max(e);
            }
        }
        out
    }

    pub fn parse(text: &str, dim: usize) -> Result<Polynomial, ExactAlgError> {
        super::parse::parse_polynomial(text, Some(dim))
    }

    /// Parses with the dimension inferred from the largest variable index.
    pub fn parse_auto(text: &str) -> Result<Polynomial, ExactAlgError> {
        super::parse::parse_polynomial(text, None)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            write_coeff_term(f, &c.abs(), &alloc::format!("{m}"), m.is_one())?;
        }
        Ok(())
    }
}

/// Writes `|c|*body`, eliding a unit coefficient and a trivial body.
pub(crate) fn write_coeff_term(
    f: &mut fmt::Formatter<'_>,
    c: &Rational,
    body: &str,
    body_is_one: bool,
) -> fmt::Result {
    if body_is_one {
        write!(f, "{c}")
    } else if c.is_one() {
        f.write_str(body)
    } else {
        write!(f, "{c}*{body}")
    }
}
