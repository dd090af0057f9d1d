//! Root multisets of b-functions and the numerical invariants read off them:
//! reduced b-functions, the chain `b^{(l)}`, weighted minimal exponents,
//! singularity classes of pairs, weight bounds and generating-level bounds.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::exactalg::{
    ceil_i64, floor_i64, int, is_integer, parse_rational, rat, Monomial, Polynomial, Rational,
    WeightVector,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BsError {
    /// A b-function of a non-constant function always vanishes at -1.
    MissingMinusOne,
    NonNegativeRoot(Rational),
    AlphaOutOfRange { alpha: Rational, allowed: &'static str },
    MinimalExponentUndefined,
    ConstantFunction,
    Syntax(String),
}

impl fmt::Display for BsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BsError::MissingMinusOne => f.write_str("b-function has no root at -1"),
            BsError::NonNegativeRoot(r) => write!(f, "b-function root {r} is not negative"),
            BsError::AlphaOutOfRange { alpha, allowed } => {
                write!(f, "alpha = {alpha} is outside the allowed range {allowed}")
            }
            BsError::MinimalExponentUndefined => {
                f.write_str("the minimal exponent is undefined (the reduced b-function is constant)")
            }
            BsError::ConstantFunction => f.write_str("the function is constant"),
            BsError::Syntax(m) => write!(f, "cannot read root product: {m}"),
        }
    }
}

/// Roots with multiplicities; the factor for root `r` is `(s - r)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RootMultiset {
    roots: BTreeMap<Rational, u32>,
}

impl RootMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Rational, u32)>) -> Self {
        let mut out = Self::new();
        for (r, m) in pairs {
            out.add(r, m);
        }
        out
    }

    pub fn add(&mut self, root: Rational, mult: u32) {
        if mult > 0 {
            *self.roots.entry(root).or_insert(0) += mult;
        }
    }

    pub fn multiplicity(&self, root: &Rational) -> u32 {
        self.roots.get(root).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.roots.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Roots in ascending order with multiplicities.
    pub fn iter(&self) -> impl Iterator<Item = (&Rational, u32)> {
        self.roots.iter().map(|(r, &m)| (r, m))
    }

    /// Removes one copy of `root`; `None` if absent.
    pub fn remove_one(&self, root: &Rational) -> Option<RootMultiset> {
        let mut out = self.clone();
        let m = out.roots.get_mut(root)?;
        *m -= 1;
        if *m == 0 {
            out.roots.remove(root);
        }
        Some(out)
    }

    /// Lowers every multiplicity by `l`.
    pub fn decrement(&self, l: u32) -> RootMultiset {
        RootMultiset {
            roots: self
                .roots
                .iter()
                .filter(|(_, &m)| m > l)
                .map(|(r, &m)| (r.clone(), m - l))
                .collect(),
        }
    }

    /// The maximal proper divisors: remove one copy of a single root.
    pub fn maximal_divisors(&self) -> Vec<(Rational, RootMultiset)> {
        self.roots
            .keys()
            .map(|r| (r.clone(), self.remove_one(r).unwrap()))
            .collect()
    }

    /// Coefficients of `prod (s - r)^m`, constant term first.
    pub fn coefficients(&self) -> Vec<Rational> {
        let mut c = alloc::vec![Rational::one()];
        for (r, m) in self.iter() {
            for _ in 0..m {
                let mut next = alloc::vec![Rational::zero(); c.len() + 1];
                for (i, a) in c.iter().enumerate() {
                    next[i + 1] += a;
                    next[i] -= a * r;
                }
                c = next;
            }
        }
        c
    }

    /// Evaluates the product at `s`.
    pub fn eval(&self, s: &Rational) -> Rational {
        self.iter().fold(Rational::one(), |acc, (r, m)| {
            let mut acc = acc;
            for _ in 0..m {
                acc *= s - r;
            }
            acc
        })
    }

    /// Reads a product such as `(s+1)^2(s+5/6)(s-1/6)(s)` or `1`.
    pub fn parse_product(text: &str) -> Result<RootMultiset, BsError> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = RootMultiset::new();
        if t == "1" {
            return Ok(out);
        }
        let mut rest = t.as_str();
        if rest.is_empty() {
            return Err(BsError::Syntax("empty product".into()));
        }
        while !rest.is_empty() {
            let inner_end = rest
                .strip_prefix("(s")
                .and_then(|r| r.find(')'))
                .ok_or_else(|| BsError::Syntax(alloc::format!("expected a factor (s+c) at {rest:?}")))?;
            let inner = &rest[2..2 + inner_end];
            let c = if inner.is_empty() {
                Rational::zero()
            } else if let Some(v) = inner.strip_prefix('+') {
                parse_rational(v).map_err(|e| BsError::Syntax(alloc::format!("{e}")))?
            } else if inner.starts_with('-') {
                parse_rational(inner).map_err(|e| BsError::Syntax(alloc::format!("{e}")))?
            } else {
                return Err(BsError::Syntax(alloc::format!("bad factor (s{inner})")));
            };
            rest = &rest[3 + inner_end..];
            let mut mult = 1;
            if let Some(r) = rest.strip_prefix('^') {
                let digits: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
                mult = digits.parse().map_err(|_| BsError::Syntax("bad exponent".into()))?;
                rest = &r[digits.len()..];
            }
            out.add(-c, mult);
        }
        Ok(out)
    }
}

impl fmt::Display for RootMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.roots.is_empty() {
            return f.write_str("1");
        }
        for (r, m) in self.iter() {
            let c = -r.clone();
            if c.is_zero() {
                f.write_str("(s)")?;
            } else if c.is_negative() {
                write!(f, "(s{c})")?;
            } else {
                write!(f, "(s+{c})")?;
            }
            if m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Provenance {
    ClosedFormSnc,
    ClosedFormQuasiHomogeneous,
    UserSupplied,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::ClosedFormSnc => "closed-form-snc",
            Provenance::ClosedFormQuasiHomogeneous => "closed-form-quasi-homogeneous",
            Provenance::UserSupplied => "user-supplied",
        }
    }
}

/// Monic Bernstein-Sato polynomial of a germ, as a root multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BFunction {
    roots: RootMultiset,
    provenance: Provenance,
    verified: bool,
}

impl BFunction {
    pub fn new(roots: RootMultiset, provenance: Provenance) -> Result<Self, BsError> {
        if let Some((r, _)) = roots.iter().find(|(r, _)| !r.is_negative()) {
            return Err(BsError::NonNegativeRoot(r.clone()));
        }
        if roots.multiplicity(&int(-1)) == 0 {
            return Err(BsError::MissingMinusOne);
        }
        Ok(BFunction { roots, provenance, verified: false })
    }

    pub fn roots(&self) -> &RootMultiset {
        &self.roots
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Marks the b-function as checked by an exact functional-equation certificate.
    /// Callers must hold such a certificate.
    pub fn mark_verified(mut self) -> Self {
        self.verified = true;
        self
    }

    pub fn multiplicity(&self, root: &Rational) -> u32 {
        self.roots.multiplicity(root)
    }
}

impl fmt::Display for BFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.roots)
    }
}

/// `b_f(s) / (s+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedBFunction {
    roots: RootMultiset,
}

impl ReducedBFunction {
    pub fn from_roots(roots: RootMultiset) -> Self {
        ReducedBFunction { roots }
    }

    pub fn roots(&self) -> &RootMultiset {
        &self.roots
    }

    pub fn multiplicity(&self, root: &Rational) -> u32 {
        self.roots.multiplicity(root)
    }
}

impl fmt::Display for ReducedBFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.roots)
    }
}

/// `b_f` for `f = prod x_i^{a_i}`: `prod_i prod_{k=1}^{a_i} (s + k/a_i)`.
pub fn bfunction_snc(exponents: &[u32]) -> Result<BFunction, BsError> {
    let mut roots = RootMultiset::new();
    for &a in exponents.iter().filter(|&&a| a > 0) {
        for k in 1..=a {
            roots.add(-rat(k as i64, a as i64), 1);
        }
    }
    if roots.is_empty() {
        return Err(BsError::ConstantFunction);
    }
    BFunction::new(roots, Provenance::ClosedFormSnc)
}

/// `b_f` for a weighted homogeneous isolated singularity with monomial basis of the
/// Milnor algebra: `(s+1) prod_{c} (s+c)` over the distinct values `deg(m) + |w|`.
pub fn bfunction_whom_isolated(
    _f: &Polynomial,
    w: &WeightVector,
    milnor_basis: &[Monomial],
) -> Result<BFunction, BsError> {
    let total = w.total();
    let mut shifts: Vec<Rational> = milnor_basis
        .iter()
        .map(|m| w.degree(m).expect("basis dimension matches weights") + &total)
        .collect();
    shifts.sort();
    shifts.dedup();
    let mut roots = RootMultiset::new();
    roots.add(int(-1), 1);
    for c in shifts {
        roots.add(-c, 1);
    }
    BFunction::new(roots, Provenance::ClosedFormQuasiHomogeneous)
}

pub fn reduce(b: &RootMultiset) -> Result<ReducedBFunction, BsError> {
    b.remove_one(&int(-1))
        .map(ReducedBFunction::from_roots)
        .ok_or(BsError::MissingMinusOne)
}

/// `b^{(l)}`: each multiplicity lowered by `l`.
pub fn bl_chain(b: &ReducedBFunction, l: u32) -> RootMultiset {
    b.roots.decrement(l)
}

/// `min { -r : r root of the reduced b-function with multiplicity > l }`.
pub fn weighted_minimal_exponent(b: &ReducedBFunction, l: u32) -> Option<Rational> {
    b.roots.iter().filter(|&(_, m)| m > l).map(|(r, _)| -r.clone()).min()
}

/// Roots of `b` in `(-alpha-1, -alpha)` moved up by one, multiplicities kept:
/// the factor `prod (s + lambda + 1)^m`.
pub fn beta_factor(b: &RootMultiset, alpha: &Rational) -> RootMultiset {
    let lo = -alpha - int(1);
    let hi = -alpha.clone();
    RootMultiset::from_pairs(
        b.iter()
            .filter(|(r, _)| **r > lo && **r < hi)
            .map(|(r, m)| (-(r + int(1)), m)),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairClass {
    pub lc: bool,
    pub plt: bool,
    pub klt: bool,
}

fn require_positive(alpha: &Rational) -> Result<(), BsError> {
    if alpha.is_positive() {
        Ok(())
    } else {
        Err(BsError::AlphaOutOfRange { alpha: alpha.clone(), allowed: "alpha > 0" })
    }
}

/// Log canonical, purely log terminal and Kawamata log terminal tests for `(X, alpha D)`.
/// A smooth germ (constant reduced b-function) behaves as if the minimal exponent were infinite.
pub fn classify_pair(b: &ReducedBFunction, alpha: &Rational) -> Result<PairClass, BsError> {
    require_positive(alpha)?;
    if *alpha > int(1) {
        return Ok(PairClass { lc: false, plt: false, klt: false });
    }
    let one = int(1);
    let Some(a0) = weighted_minimal_exponent(b, 0) else {
        return Ok(PairClass { lc: true, plt: true, klt: *alpha != one });
    };
    let a1 = weighted_minimal_exponent(b, 1);
    let lc = *alpha <= a0;
    let plt = *alpha < a0 || (*alpha == a0 && *alpha != one && a1.as_ref() != Some(&a0));
    let klt = *alpha != one && *alpha < a0;
    Ok(PairClass { lc, plt, klt })
}

/// Range `(lower, upper)` for the largest index `w` with `gr^W_w` nonzero.
pub fn weight_bounds(b: &ReducedBFunction, alpha: &Rational, n: u32) -> Result<(u32, u32), BsError> {
    require_positive(alpha)?;
    let base = n as i64 + floor_i64(alpha);
    let mut lower = 0u32;
    let mut sum = 0u32;
    for (r, m) in b.roots.iter() {
        let i = -alpha - r;
        if is_integer(&i) {
            lower = lower.max(m);
            if !i.is_negative() {
                sum += m;
            }
        }
    }
    let lo = (base + lower as i64) as u32;
    let hi = ((base + sum as i64) as u32).max(lo);
    Ok((lo, hi))
}

/// Upper bound for the generating level of the Hodge filtration.
/// With `graded` unset this bounds the whole module (`l` is ignored); otherwise it
/// bounds `gr^W_{n+l}` for `alpha` in `(0, 1]`.
pub fn genlevel_bound(
    b: &ReducedBFunction,
    alpha: &Rational,
    n: u32,
    l: u32,
    graded: bool,
) -> Result<i64, BsError> {
    require_positive(alpha)?;
    let at = weighted_minimal_exponent(b, 0).ok_or(BsError::MinimalExponentUndefined)?;
    let n = n as i64;
    if !graded {
        let v = n - ceil_i64(&(alpha + &at)) + 1 - floor_i64(alpha);
        return Ok((n - 1).min(v));
    }
    if *alpha > int(1) {
        return Err(BsError::AlphaOutOfRange { alpha: alpha.clone(), allowed: "0 < alpha <= 1" });
    }
    let l = l as i64;
    Ok(if *alpha == int(1) {
        n - l - ceil_i64(&at)
    } else {
        n - l - ceil_i64(&(alpha + &at)) + 1
    })
}

/// Whether `F_k W_{n+l+floor(alpha)}` equals the full pole-order piece `O f^{-k-alpha}`.
pub fn hodge_pole_full(b: &ReducedBFunction, alpha: &Rational, k: u32, l: u32) -> bool {
    let Some(a0) = weighted_minimal_exponent(b, 0) else {
        return true;
    };
    let ka = alpha + int(k as i64);
    if ka < a0 {
        return true;
    }
    ka == a0 && weighted_minimal_exponent(b, l).as_ref() != Some(&a0)
}

/// A real interval with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn open(lo: Rational, hi: Rational) -> Self {
        Interval { lo, hi, lo_closed: false, hi_closed: false }
    }

    /// `(lo, hi]`.
    pub fn open_closed(lo: Rational, hi: Rational) -> Self {
        Interval { lo, hi, lo_closed: false, hi_closed: true }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }
}

pub fn roots_in_interval(b: &RootMultiset, interval: &Interval) -> bool {
    b.iter().all(|(r, _)| interval.contains(r))
}
