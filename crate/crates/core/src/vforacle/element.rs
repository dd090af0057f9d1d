use alloc::collections::BTreeMap;
use core::fmt;

use num_traits::{One, Zero};

use crate::exactalg::linalg::SparseVec;
use crate::exactalg::{int, Monomial, Polynomial, Rational};
use crate::weyl::WeylOperator;

use super::OracleError;

/// `sum_j g_j f^{-twist} dt^j` in the graph embedding module `O[dt]`;
/// twist zero is `i_{f,+} O_X` itself. Zero layers are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfElement {
    dim: usize,
    layers: BTreeMap<u32, Polynomial>,
    twist: Rational,
}

/// The elementary operators acting on the graph embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BfAction {
    T,
    Dt,
    S,
    X(usize),
    D(usize),
}

impl BfElement {
    pub fn zero(dim: usize) -> Self {
        BfElement { dim, layers: BTreeMap::new(), twist: Rational::zero() }
    }

    /// `g dt^j`.
    pub fn layer(g: Polynomial, j: u32) -> Self {
        let mut u = BfElement::zero(g.dim());
        u.add_layer(j, g);
        u
    }

    pub fn with_twist(mut self, twist: Rational) -> Self {
        self.twist = twist;
        self
    }

    pub fn from_layers(dim: usize, layers: impl IntoIterator<Item = (u32, Polynomial)>) -> Self {
        let mut u = BfElement::zero(dim);
        for (j, g) in layers {
            u.add_layer(j, g);
        }
        u
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn twist(&self) -> &Rational {
        &self.twist
    }

    pub fn layers(&self) -> &BTreeMap<u32, Polynomial> {
        &self.layers
    }

    pub fn get(&self, j: u32) -> Polynomial {
        self.layers.get(&j).cloned().unwrap_or_else(|| Polynomial::zero(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.layers.is_empty()
    }

    /// Highest `dt` power present.
    pub fn t_order(&self) -> Option<u32> {
        self.layers.keys().next_back().copied()
    }

    pub fn x_degree(&self) -> Option<u32> {
        self.layers.values().filter_map(Polynomial::total_degree).max()
    }

    pub fn add_layer(&mut self, j: u32, g: Polynomial) {
        if g.is_zero() {
            return;
        }
        let sum = match self.layers.remove(&j) {
            Some(h) => h.add(&g),
            None => g,
        };
        if !sum.is_zero() {
            self.layers.insert(j, sum);
        }
    }

    pub fn add(&self, other: &BfElement) -> BfElement {
        let mut out = self.clone();
        for (&j, g) in &other.layers {
            out.add_layer(j, g.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> BfElement {
        let mut out = BfElement::zero(self.dim).with_twist(self.twist.clone());
        for (&j, g) in &self.layers {
            out.add_layer(j, g.scale(c));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> BfElement {
        let mut out = BfElement::zero(self.dim).with_twist(self.twist.clone());
        for (&j, g) in &self.layers {
            out.add_layer(j, g.mul_monomial(m));
        }
        out
    }

    pub fn to_vector(&self) -> SparseVec<(u32, Monomial)> {
        let mut v = SparseVec::new();
        for (&j, g) in &self.layers {
            for (m, c) in g.terms() {
                v.insert((j, m.clone()), c.clone());
            }
        }
        v
    }

    fn derivative_untwisted(&self, f: &Polynomial, i: usize) -> BfElement {
        let fi = f.partial(i);
        let mut out = BfElement::zero(self.dim).with_twist(self.twist.clone());
        for (&j, g) in &self.layers {
            out.add_layer(j, g.partial(i));
            out.add_layer(j + 1, fi.mul(g).neg());
        }
        out
    }
}

/// `t (g dt^k) = f g dt^k - k g dt^{k-1}`, `dt` raises the layer, `s = -dt t`,
/// `d_i (g dt^k) = d_i(g) dt^k - d_i(f) g dt^{k+1}`.
pub fn act(op: BfAction, u: &BfElement, f: &Polynomial) -> Result<BfElement, OracleError> {
    let mut out = BfElement::zero(u.dim).with_twist(u.twist.clone());
    match op {
        BfAction::T => {
            for (&k, g) in &u.layers {
                out.add_layer(k, f.mul(g));
                if k > 0 {
                    out.add_layer(k - 1, g.scale(&-int(k as i64)));
                }
            }
        }
        BfAction::Dt => {
            for (&k, g) in &u.layers {
                out.add_layer(k + 1, g.clone());
            }
        }
        BfAction::S => {
            let tu = act(BfAction::T, u, f)?;
            out = act(BfAction::Dt, &tu, f)?.scale(&-Rational::one());
        }
        BfAction::X(i) => {
            for (&k, g) in &u.layers {
                out.add_layer(k, g.mul(&Polynomial::var(u.dim, i)));
            }
        }
        BfAction::D(i) => {
            if !u.twist.is_zero() {
                return Err(OracleError::TwistedDerivative);
            }
            out = u.derivative_untwisted(f, i);
        }
    }
    Ok(out)
}

/// `(s + c)^power u`.
pub fn s_shift_power(u: &BfElement, f: &Polynomial, c: &Rational, power: u32) -> BfElement {
    let mut cur = u.clone();
    for _ in 0..power {
        let su = act(BfAction::S, &cur, f).expect("s never fails");
        cur = su.add(&cur.scale(c));
    }
    cur
}

/// `d^gamma u` for all `|gamma| <= max_order` (twist must be zero).
pub fn bf_derivatives(u: &BfElement, f: &Polynomial, max_order: u32) -> BTreeMap<Monomial, BfElement> {
    let dim = f.dim();
    let mut out: BTreeMap<Monomial, BfElement> = BTreeMap::new();
    out.insert(Monomial::one(dim), u.clone());
    for gamma in Monomial::all_up_to(dim, max_order) {
        if gamma.is_one() {
            continue;
        }
        let i = gamma.exps().iter().position(|&e| e > 0).unwrap();
        let mut prev = gamma.clone();
        prev.0[i] -= 1;
        let next = out[&prev].derivative_untwisted(f, i);
        out.insert(gamma, next);
    }
    out
}

/// Applies an operator of `D_X[s]`, with `s` acting as `-dt t`.
pub fn act_weyl(op: &WeylOperator, u: &BfElement, f: &Polynomial) -> Result<BfElement, OracleError> {
    if !u.twist.is_zero() && op.d_order().unwrap_or(0) > 0 {
        return Err(OracleError::TwistedDerivative);
    }
    let max_s = op.s_degree().unwrap_or(0);
    let mut s_powers = alloc::vec![u.clone()];
    for _ in 0..max_s {
        let next = act(BfAction::S, s_powers.last().unwrap(), f)?;
        s_powers.push(next);
    }
    let max_d = op.d_order().unwrap_or(0);
    let derivs: alloc::vec::Vec<BTreeMap<Monomial, BfElement>> =
        s_powers.iter().map(|v| bf_derivatives(v, f, max_d)).collect();
    let mut out = BfElement::zero(u.dim).with_twist(u.twist.clone());
    for (m, c) in op.terms() {
        let base = &derivs[m.s as usize][&m.d];
        out = out.add(&base.mul_monomial(&m.x).scale(c));
    }
    Ok(out)
}

impl fmt::Display for BfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.layers.is_empty() {
            return f.write_str("0");
        }
        for (idx, (j, g)) in self.layers.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            match j {
                0 => write!(f, "({g})")?,
                1 => write!(f, "({g})*dt")?,
                _ => write!(f, "({g})*dt^{j}")?,
            }
        }
        Ok(())
    }
}
