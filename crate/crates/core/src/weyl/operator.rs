use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::exactalg::parse::{check_dim, inferred_dim, parse_terms, Atom};
use crate::exactalg::{
    binomial, falling, write_coeff_term, write_power_product, ExactAlgError, Monomial, Polynomial,
    Rational,
};

/// Normal-ordered monomial `x^beta d^gamma s^j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylMonomial {
    pub x: Monomial,
    pub d: Monomial,
    pub s: u32,
}

impl WeylMonomial {
    pub fn one(dim: usize) -> Self {
        WeylMonomial { x: Monomial::one(dim), d: Monomial::one(dim), s: 0 }
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    /// `|gamma| + j`.
    pub fn total_order(&self) -> u32 {
        self.d.degree() + self.s
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.d.is_one() && self.s == 0
    }
}

impl Ord for WeylMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let deg = |m: &WeylMonomial| m.x.degree() + m.d.degree() + m.s;
        deg(self)
            .cmp(&deg(other))
            .then_with(|| self.d.cmp(&other.d))
            .then_with(|| self.x.cmp(&other.x))
            .then_with(|| self.s.cmp(&other.s))
    }
}

impl PartialOrd for WeylMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for WeylMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut parts: Vec<String> = Vec::new();
        if !self.x.is_one() {
            parts.push(alloc::format!("{}", self.x));
        }
        if !self.d.is_one() {
            parts.push(alloc::format!("{}", DPart(&self.d)));
        }
        match self.s {
            0 => {}
            1 => parts.push("s".into()),
            j => parts.push(alloc::format!("s^{j}")),
        }
        f.write_str(&parts.join("*"))
    }
}

struct DPart<'a>(&'a Monomial);

impl fmt::Display for DPart<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_power_product(f, "d", self.0.exps(), false)
    }
}

/// Element of `D_X[s]` with polynomial coefficients, stored in normal order
/// (`x` left, `d` middle, central `s` right).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylOperator {
    dim: usize,
    terms: BTreeMap<WeylMonomial, Rational>,
}

impl WeylOperator {
    pub fn zero(dim: usize) -> Self {
        WeylOperator { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::term(c, WeylMonomial::one(dim))
    }

    pub fn term(c: Rational, m: WeylMonomial) -> Self {
        let mut op = WeylOperator::zero(m.dim());
        op.add_term(m, c);
        op
    }

    pub fn monomial(m: WeylMonomial) -> Self {
        Self::term(Rational::one(), m)
    }

    pub fn x(dim: usize, i: usize) -> Self {
        Self::monomial(WeylMonomial { x: Monomial::var(dim, i), d: Monomial::one(dim), s: 0 })
    }

    pub fn d(dim: usize, i: usize) -> Self {
        Self::monomial(WeylMonomial { x: Monomial::one(dim), d: Monomial::var(dim, i), s: 0 })
    }

    pub fn s(dim: usize) -> Self {
        Self::monomial(WeylMonomial { x: Monomial::one(dim), d: Monomial::one(dim), s: 1 })
    }

    pub fn from_polynomial(p: &Polynomial) -> Self {
        let dim = p.dim();
        let mut op = WeylOperator::zero(dim);
        for (m, c) in p.terms() {
            op.add_term(WeylMonomial { x: m.clone(), d: Monomial::one(dim), s: 0 }, c.clone());
        }
        op
    }

    /// Polynomial in `s` with rational coefficients, as an operator.
    pub fn from_s_coefficients(dim: usize, coeffs: &[Rational]) -> Self {
        let mut op = WeylOperator::zero(dim);
        for (j, c) in coeffs.iter().enumerate() {
            op.add_term(
                WeylMonomial { x: Monomial::one(dim), d: Monomial::one(dim), s: j as u32 },
                c.clone(),
            );
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<WeylMonomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: WeylMonomial, c: Rational) {
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

    pub fn add(&self, other: &WeylOperator) -> WeylOperator {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &WeylOperator) -> WeylOperator {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> WeylOperator {
        if c.is_zero() {
            return WeylOperator::zero(self.dim);
        }
        WeylOperator {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &WeylOperator) -> WeylOperator {
        let mut out = WeylOperator::zero(self.dim);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1 * c2;
                for (m, k) in monomial_product(m1, m2) {
                    out.add_term(m, &c * k);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> WeylOperator {
        let mut acc = WeylOperator::one(self.dim);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn commutator(&self, other: &WeylOperator) -> WeylOperator {
        self.mul(other).sub(&other.mul(self))
    }

    /// Largest `|gamma| + j` over the terms, `None` for the zero operator.
    pub fn total_order(&self) -> Option<u32> {
        self.terms.keys().map(WeylMonomial::total_order).max()
    }

    /// Largest `|gamma|`, ignoring `s`.
    pub fn d_order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.d.degree()).max()
    }

    pub fn s_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.s).max()
    }

    pub fn x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.x.degree()).max()
    }

    pub fn is_s_free(&self) -> bool {
        self.terms.keys().all(|m| m.s == 0)
    }

    /// Terms of total order at most `k` (kept) and above `k` (returned second).
    pub fn split_total_order(&self, k: u32) -> (WeylOperator, WeylOperator) {
        let mut low = WeylOperator::zero(self.dim);
        let mut high = WeylOperator::zero(self.dim);
        for (m, c) in &self.terms {
            let target = if m.total_order() <= k { &mut low } else { &mut high };
            target.terms.insert(m.clone(), c.clone());
        }
        (low, high)
    }

    /// Substitutes a rational value for `s`.
    pub fn eval_s(&self, value: &Rational) -> WeylOperator {
        let mut out = WeylOperator::zero(self.dim);
        for (m, c) in &self.terms {
            let mut factor = Rational::one();
            for _ in 0..m.s {
                factor *= value;
            }
            out.add_term(WeylMonomial { x: m.x.clone(), d: m.d.clone(), s: 0 }, c * factor);
        }
        out
    }

    /// The operator as a polynomial in `x` when it has no `d` and no `s`.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        let mut p = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            if !m.d.is_one() || m.s != 0 {
                return None;
            }
            p.add_term(m.x.clone(), c.clone());
        }
        Some(p)
    }

    pub fn parse(text: &str, dim: usize) -> Result<WeylOperator, ExactAlgError> {
        let terms = parse_terms(text)?;
        check_dim(&terms, dim)?;
        Ok(build(&terms, dim))
    }

    pub fn parse_auto(text: &str) -> Result<WeylOperator, ExactAlgError> {
        let terms = parse_terms(text)?;
        let dim = inferred_dim(&terms);
        Ok(build(&terms, dim))
    }
}

fn build(terms: &[(bool, Vec<Atom>)], dim: usize) -> WeylOperator {
    let mut total = WeylOperator::zero(dim);
    for (negative, atoms) in terms {
        let mut acc = WeylOperator::one(dim);
        for a in atoms {
            acc = match a {
                Atom::Coeff(q) => acc.scale(q),
                Atom::X(i, e) => acc.mul(&WeylOperator::x(dim, *i).pow(*e)),
                Atom::D(i, e) => acc.mul(&WeylOperator::d(dim, *i).pow(*e)),
                Atom::S(e) => acc.mul(&WeylOperator::s(dim).pow(*e)),
            };
        }
        total = if *negative { total.sub(&acc) } else { total.add(&acc) };
    }
    total
}

/// Normal-ordered expansion of `(x^a d^b s^i)(x^c d^e s^j)`.
fn monomial_product(m1: &WeylMonomial, m2: &WeylMonomial) -> Vec<(WeylMonomial, Rational)> {
    let dim = m1.dim();
    // Per variable: d^b x^c = sum_k C(b,k) c!/(c-k)! x^(c-k) d^(b-k).
    let mut partial: Vec<(Vec<u32>, Vec<u32>, Rational)> =
        alloc::vec![(alloc::vec![0; dim], alloc::vec![0; dim], Rational::one())];
    for i in 0..dim {
        let b = m1.d.exps()[i];
        let c = m2.x.exps()[i];
        let mut next = Vec::new();
        for (xs, ds, coeff) in &partial {
            for k in 0..=b.min(c) {
                let mut xs = xs.clone();
                let mut ds = ds.clone();
                xs[i] = m1.x.exps()[i] + c - k;
                ds[i] = b - k + m2.d.exps()[i];
                next.push((xs, ds, coeff * binomial(b, k) * falling(c, k)));
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|(xs, ds, c)| (WeylMonomial { x: Monomial(xs), d: Monomial(ds), s: m1.s + m2.s }, c))
        .collect()
}

impl fmt::Display for WeylOperator {
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
