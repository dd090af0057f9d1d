//! The Weyl algebra `D_X[s]` on affine space: normal ordering, orders,
//! action on twisted sections `g f^{s+m}`, bounded bases and syzygies.

mod operator;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::exactalg::linalg::{EchelonSpan, Insertion, SparseVec};
use crate::exactalg::{int, Monomial, Polynomial, Rational};

pub use operator::{WeylMonomial, WeylOperator};

/// `numerator * f^{s + shift - pole}`, the numerator being a polynomial in
/// `x1..xn, s` (the variable with index `n` is `s`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedSection {
    numerator: Polynomial,
    pole: u32,
    shift: i64,
}

impl TwistedSection {
    /// `f^{s + shift}` for a function of `dim` variables.
    pub fn power(dim: usize, shift: i64) -> Self {
        TwistedSection { numerator: Polynomial::one(dim + 1), pole: 0, shift }
    }

    pub fn new(numerator: Polynomial, pole: u32, shift: i64) -> Self {
        TwistedSection { numerator, pole, shift }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn pole(&self) -> u32 {
        self.pole
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Dimension of the underlying affine space (the numerator carries one more variable).
    pub fn dim(&self) -> usize {
        self.numerator.dim() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Cancels factors of `f` from the numerator while a pole remains.
    pub fn normalize(&self, f: &Polynomial) -> TwistedSection {
        let fe = f.embed(self.numerator.dim());
        let mut out = self.clone();
        if out.numerator.is_zero() {
            out.pole = 0;
            return out;
        }
        while out.pole > 0 {
            match out.numerator.exact_div(&fe) {
                Some(q) => {
                    out.numerator = q;
                    out.pole -= 1;
                }
                None => break,
            }
        }
        out
    }

    /// Numerator with all factors of `f` removed, and the resulting exponent offset `e`
    /// in `numerator * f^{s+e}`. Two sections are equal exactly when these agree.
    pub fn canonical(&self, f: &Polynomial) -> (Polynomial, i64) {
        if self.numerator.is_zero() {
            return (self.numerator.clone(), 0);
        }
        let fe = f.embed(self.numerator.dim());
        let (k, q) = self.numerator.strip_factor(&fe);
        (q, self.shift - self.pole as i64 + k as i64)
    }

    /// The same section written over `f^{s + shift - pole}` with a larger pole.
    pub fn lift_pole(&self, f: &Polynomial, pole: u32) -> Polynomial {
        assert!(pole >= self.pole);
        let fe = f.embed(self.numerator.dim());
        self.numerator.mul(&fe.pow(pole - self.pole))
    }

    fn derivative(&self, f: &Polynomial, i: usize) -> TwistedSection {
        let n1 = self.numerator.dim();
        let fe = f.embed(n1);
        let s_plus_e = Polynomial::var(n1, n1 - 1).add(&Polynomial::constant(n1, int(self.shift - self.pole as i64)));
        let numerator = self
            .numerator
            .partial(i)
            .mul(&fe)
            .add(&s_plus_e.mul(&self.numerator).mul(&fe.partial(i)));
        TwistedSection { numerator, pole: self.pole + 1, shift: self.shift }
    }
}

/// `d^gamma (sec)` for every `gamma` with `|gamma| <= max_order`, unnormalized
/// (the pole grows by exactly `|gamma|`).
pub fn twisted_derivatives(
    f: &Polynomial,
    sec: &TwistedSection,
    max_order: u32,
) -> BTreeMap<Monomial, TwistedSection> {
    let dim = f.dim();
    let mut out: BTreeMap<Monomial, TwistedSection> = BTreeMap::new();
    out.insert(Monomial::one(dim), sec.clone());
    for gamma in Monomial::all_up_to(dim, max_order) {
        if gamma.is_one() {
            continue;
        }
        let i = gamma.exps().iter().position(|&e| e > 0).unwrap();
        let mut prev = gamma.clone();
        prev.0[i] -= 1;
        let next = out[&prev].derivative(f, i);
        out.insert(gamma, next);
    }
    out
}

/// Applies an operator in `D_X[s]` to `g f^{s+m}` using the chain rule
/// `d_i(g f^{s+m}) = d_i(g) f^{s+m} + (s+m) g d_i(f) f^{s+m-1}`.
pub fn apply_to_twisted(op: &WeylOperator, f: &Polynomial, sec: &TwistedSection) -> TwistedSection {
    let n1 = f.dim() + 1;
    let max_d = op.d_order().unwrap_or(0);
    let derivs = twisted_derivatives(f, sec, max_d);
    let pole = sec.pole + max_d;
    let mut numerator = Polynomial::zero(n1);
    for (m, c) in op.terms() {
        let base = &derivs[&m.d];
        let mut shift_mono = m.x.0.clone();
        shift_mono.push(m.s);
        let term = base
            .lift_pole(f, pole)
            .mul_monomial(&Monomial(shift_mono))
            .scale(c);
        numerator = numerator.add(&term);
    }
    TwistedSection { numerator, pole, shift: sec.shift }.normalize(f)
}

/// Monomials `x^beta d^gamma s^j` with `|beta| <= xdeg` and `|gamma| + j <= order`,
/// with `j <= s_bound` (no `s` at all when `s_bound` is `None`), in ascending order.
pub fn bounded_operator_basis(dim: usize, order: u32, xdeg: u32, s_bound: Option<u32>) -> Vec<WeylMonomial> {
    let xs = Monomial::all_up_to(dim, xdeg);
    let ds = Monomial::all_up_to(dim, order);
    let mut out = Vec::new();
    for x in &xs {
        for d in &ds {
            let room = order - d.degree();
            let jmax = s_bound.map_or(0, |b| b.min(room));
            for j in 0..=jmax {
                out.push(WeylMonomial { x: x.clone(), d: d.clone(), s: j });
            }
        }
    }
    out.sort();
    out
}

/// Syzygies `(P_1..P_r)` with `sum P_i t_i = 0` and each `P_i` supported on a bounded basis.
#[derive(Clone, Debug)]
pub struct SyzygyKernel {
    pub tuples: Vec<Vec<WeylOperator>>,
    pub order_bound: u32,
    pub xdeg_bound: u32,
}

pub fn syzygy_kernel(targets: &[WeylOperator], order: u32, xdeg: u32) -> SyzygyKernel {
    let dim = targets.first().map_or(1, WeylOperator::dim);
    let s_bound = if targets.iter().all(WeylOperator::is_s_free) { None } else { Some(order) };
    let basis = bounded_operator_basis(dim, order, xdeg, s_bound);
    syzygy_kernel_over(targets, &basis, order, xdeg)
}

/// Same as [`syzygy_kernel`] over an explicit list of monomials.
pub fn syzygy_kernel_over(targets: &[WeylOperator], basis: &[WeylMonomial], order: u32, xdeg: u32) -> SyzygyKernel {
    let dim = targets.first().map_or(1, WeylOperator::dim);
    let mut span: EchelonSpan<WeylMonomial> = EchelonSpan::new(true);
    let mut unknowns: Vec<(usize, &WeylMonomial)> = Vec::new();
    let mut tuples = Vec::new();
    for (i, t) in targets.iter().enumerate() {
        for m in basis {
            let v: SparseVec<WeylMonomial> = WeylOperator::monomial(m.clone()).mul(t).terms().clone();
            unknowns.push((i, m));
            if let Insertion::Dependent(combo) = span.insert(v) {
                let mut tuple = alloc::vec![WeylOperator::zero(dim); targets.len()];
                for (idx, c) in combo {
                    let (ti, m) = unknowns[idx];
                    tuple[ti].add_term(m.clone(), c);
                }
                tuples.push(normalize_tuple(tuple));
            }
        }
    }
    SyzygyKernel { tuples, order_bound: order, xdeg_bound: xdeg }
}

/// Scales so that the leading coefficient of the first nonzero entry is one.
fn normalize_tuple(tuple: Vec<WeylOperator>) -> Vec<WeylOperator> {
    let lead = tuple
        .iter()
        .find_map(|p| p.terms().iter().next_back().map(|(_, c)| c.clone()));
    match lead {
        Some(c) => {
            let inv = Rational::from_integer(1.into()) / c;
            tuple.iter().map(|p| p.scale(&inv)).collect()
        }
        None => tuple,
    }
}

/// `sum_i P_i t_i`.
pub fn recombine(tuple: &[WeylOperator], targets: &[WeylOperator]) -> WeylOperator {
    let dim = targets.first().map_or(1, WeylOperator::dim);
    tuple
        .iter()
        .zip(targets)
        .fold(WeylOperator::zero(dim), |acc, (p, t)| acc.add(&p.mul(t)))
}

/// `Q_j(q) = q (q+1) ... (q+j-1)`.
pub fn pochhammer(q: &Rational, j: u32) -> Rational {
    crate::exactalg::rising(q, j)
}

#[cfg(test)]
mod tests;

/// `numerator * f^{exponent}` with a rational exponent, an element of `O(*f) f^{exponent}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSection {
    pub numerator: Polynomial,
    pub exponent: Rational,
}

impl PowerSection {
    pub fn new(numerator: Polynomial, exponent: Rational) -> Self {
        PowerSection { numerator, exponent }
    }

    /// Numerator over `f^{target}`; `None` unless `exponent - target` is a
    /// non-negative integer.
    pub fn numerator_at(&self, f: &Polynomial, target: &Rational) -> Option<Polynomial> {
        let gap = &self.exponent - target;
        if !crate::exactalg::is_integer(&gap) || gap < Rational::from_integer(0.into()) {
            return None;
        }
        let k = crate::exactalg::floor_i64(&gap) as u32;
        Some(self.numerator.mul(&f.pow(k)))
    }

    /// Cancels every factor of `f` from the numerator.
    pub fn reduced(&self, f: &Polynomial) -> PowerSection {
        if self.numerator.is_zero() {
            return self.clone();
        }
        let (k, q) = self.numerator.strip_factor(f);
        PowerSection { numerator: q, exponent: &self.exponent + int(k as i64) }
    }

    fn derivative(&self, f: &Polynomial, i: usize) -> PowerSection {
        let numerator = self
            .numerator
            .partial(i)
            .mul(f)
            .add(&self.numerator.mul(&f.partial(i)).scale(&self.exponent));
        PowerSection { numerator, exponent: &self.exponent - int(1) }
    }
}

/// `d^gamma (sec)` for every `|gamma| <= max_order`; the exponent drops by `|gamma|`.
pub fn power_derivatives(f: &Polynomial, sec: &PowerSection, max_order: u32) -> BTreeMap<Monomial, PowerSection> {
    let dim = f.dim();
    let mut out: BTreeMap<Monomial, PowerSection> = BTreeMap::new();
    out.insert(Monomial::one(dim), sec.clone());
    for gamma in Monomial::all_up_to(dim, max_order) {
        if gamma.is_one() {
            continue;
        }
        let i = gamma.exps().iter().position(|&e| e > 0).unwrap();
        let mut prev = gamma.clone();
        prev.0[i] -= 1;
        let next = out[&prev].derivative(f, i);
        out.insert(gamma, next);
    }
    out
}

/// Applies an `s`-free operator to `g f^{c}`.
pub fn apply_to_power(op: &WeylOperator, f: &Polynomial, sec: &PowerSection) -> PowerSection {
    assert!(op.is_s_free(), "operator must not involve s");
    let max_d = op.d_order().unwrap_or(0);
    let derivs = power_derivatives(f, sec, max_d);
    let exponent = &sec.exponent - int(max_d as i64);
    let mut numerator = Polynomial::zero(f.dim());
    for (m, c) in op.terms() {
        let term = derivs[&m.d]
            .numerator_at(f, &exponent)
            .expect("derivative exponents differ by integers")
            .mul_monomial(&m.x)
            .scale(c);
        numerator = numerator.add(&term);
    }
    PowerSection { numerator, exponent }
}
