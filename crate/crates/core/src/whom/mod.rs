//! Weighted homogeneous isolated singularities: Milnor algebra bases and the
//! closed forms for Hodge pieces of the low weight steps and for the
//! microlocal multiplier ideals.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::bsdata::{bfunction_whom_isolated, BFunction, BsError};
use crate::exactalg::linalg::{EchelonSpan, SparseVec};
use crate::exactalg::{graded_ideal, int, Monomial, MonomialIdeal, Polynomial, Rational, WeightVector};
use crate::snc::HodgePresentation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WhomError {
    DimensionMismatch { poly: usize, weights: usize },
    NotQuasiHomogeneous,
    NonIsolated,
    AlphaOutOfRange(Rational),
    LevelOutOfRange { l: u32, top: u32 },
    BFunction(BsError),
}

impl fmt::Display for WhomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WhomError::DimensionMismatch { poly, weights } => {
                write!(f, "polynomial has {poly} variables but {weights} weights were given")
            }
            WhomError::NotQuasiHomogeneous => {
                f.write_str("f is not weighted homogeneous of degree 1 for the given weights")
            }
            WhomError::NonIsolated => f.write_str("the singularity at the origin is not isolated"),
            WhomError::AlphaOutOfRange(a) => write!(f, "alpha = {a} must lie in (0, 1]"),
            WhomError::LevelOutOfRange { l, top } => {
                write!(f, "weight level l = {l} exceeds the top level {top}")
            }
            WhomError::BFunction(e) => write!(f, "{e}"),
        }
    }
}

/// A germ `f` weighted homogeneous of degree one with an isolated singularity at 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiHomogeneousGerm {
    f: Polynomial,
    w: WeightVector,
    milnor_basis: Vec<Monomial>,
    socle_degree: Rational,
}

impl QuasiHomogeneousGerm {
    pub fn new(f: Polynomial, w: WeightVector) -> Result<Self, WhomError> {
        let milnor_basis = milnor_basis(&f, &w)?;
        let socle_degree = socle_degree(&w);
        Ok(QuasiHomogeneousGerm { f, w, milnor_basis, socle_degree })
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn weights(&self) -> &WeightVector {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn milnor_basis(&self) -> &[Monomial] {
        &self.milnor_basis
    }

    pub fn milnor_number(&self) -> usize {
        self.milnor_basis.len()
    }

    pub fn socle_degree(&self) -> &Rational {
        &self.socle_degree
    }

    pub fn bfunction(&self) -> Result<BFunction, WhomError> {
        bfunction_whom_isolated(&self.f, &self.w, &self.milnor_basis).map_err(WhomError::BFunction)
    }

    /// `O^{>gamma}` or `O^{>=gamma}` for these weights.
    pub fn graded(&self, gamma: &Rational, strict: bool) -> MonomialIdeal {
        graded_ideal(&self.w, gamma, strict)
    }
}

/// `sum_i (1 - 2 w_i)`, the top degree of the Milnor algebra.
pub fn socle_degree(w: &WeightVector) -> Rational {
    w.weights().iter().fold(Rational::zero(), |acc, wi| acc + int(1) - wi * int(2))
}

fn check_quasi_homogeneous(f: &Polynomial, w: &WeightVector) -> Result<(), WhomError> {
    if f.dim() != w.dim() {
        return Err(WhomError::DimensionMismatch { poly: f.dim(), weights: w.dim() });
    }
    if f.is_zero() || f.terms().keys().any(|m| w.degree(m).unwrap() != Rational::one()) {
        return Err(WhomError::NotQuasiHomogeneous);
    }
    Ok(())
}

/// Standard monomials of `O / (d_1 f, .., d_n f)`, computed one weighted degree at a time.
///
/// Isolatedness is certified by checking that every monomial of degree in
/// `(socle, socle + max w]` lies in the Jacobian ideal; all higher monomials are
/// multiples of those.
pub fn milnor_basis(f: &Polynomial, w: &WeightVector) -> Result<Vec<Monomial>, WhomError> {
    check_quasi_homogeneous(f, w)?;
    let dim = f.dim();
    let socle = socle_degree(w);
    let cap = &socle + w.max();
    let partials: Vec<Polynomial> = (0..dim).map(|i| f.partial(i)).collect();
    // Group monomials of degree <= cap by weighted degree.
    let mut by_degree: BTreeMap<Rational, Vec<Monomial>> = BTreeMap::new();
    if !cap.is_negative() {
        let bounds: Vec<u32> = w
            .weights()
            .iter()
            .map(|wi| crate::exactalg::floor_i64(&(&cap / wi)).max(0) as u32)
            .collect();
        for m in box_monomials(&bounds) {
            let d = w.degree(&m).unwrap();
            if d <= cap {
                by_degree.entry(d).or_default().push(m);
            }
        }
    }
    let mut basis = Vec::new();
    for (deg, monos) in &by_degree {
        let mut span: EchelonSpan<Monomial> = EchelonSpan::new(false);
        for (i, p) in partials.iter().enumerate() {
            // d_i f has degree 1 - w_i, so it needs a multiplier of degree deg - 1 + w_i.
            let need = deg - int(1) + &w.weights()[i];
            if need.is_negative() || p.is_zero() {
                continue;
            }
            if let Some(mults) = by_degree.get(&need) {
                for m in mults {
                    let v: SparseVec<Monomial> = p.mul_monomial(m).into_terms();
                    span.insert(v);
                }
            }
        }
        let standard: Vec<&Monomial> = monos.iter().filter(|m| !span.is_pivot(m)).collect();
        if *deg <= socle {
            basis.extend(standard.into_iter().cloned());
        } else if !standard.is_empty() {
            return Err(WhomError::NonIsolated);
        }
    }
    basis.sort();
    Ok(basis)
}

fn box_monomials(bounds: &[u32]) -> Vec<Monomial> {
    let mut out = alloc::vec![Monomial(alloc::vec![0; bounds.len()])];
    for (i, &b) in bounds.iter().enumerate() {
        let mut next = Vec::new();
        for m in &out {
            for e in 0..=b {
                let mut k = m.clone();
                k.0[i] = e;
                next.push(k);
            }
        }
        out = next;
    }
    out
}

fn check_alpha(alpha: &Rational) -> Result<(), WhomError> {
    if alpha.is_positive() && *alpha <= int(1) {
        Ok(())
    } else {
        Err(WhomError::AlphaOutOfRange(alpha.clone()))
    }
}

/// 1 for `alpha` in `(0,1)`, 2 for `alpha = 1`.
pub fn whom_weight_top(alpha: &Rational) -> Result<u32, WhomError> {
    check_alpha(alpha)?;
    Ok(if *alpha == int(1) { 2 } else { 1 })
}

/// `F_k W_{n+l}` of `O(*f) f^{-alpha}` as `sum_j F_{k-j} D . O^{>(=) alpha+j-|w|} f^{-j-alpha}`.
///
/// The top level uses the non-strict graded pieces, the level below it the strict
/// ones; for `alpha = 1` the bottom level `W_n` is `O_X`.
pub fn whom_hodge_weight(
    germ: &QuasiHomogeneousGerm,
    alpha: &Rational,
    k: u32,
    l: u32,
) -> Result<HodgePresentation, WhomError> {
    let top = whom_weight_top(alpha)?;
    if l > top {
        return Err(WhomError::LevelOutOfRange { l, top });
    }
    let mut p = HodgePresentation::new(alpha.clone());
    if top == 2 && l == 0 {
        p.push(0, germ.f.clone(), 0);
        return Ok(p);
    }
    let strict = l < top;
    let total = germ.w.total();
    for j in 0..=k {
        let gamma = alpha + int(j as i64) - &total;
        for g in germ.graded(&gamma, strict).generator_polys() {
            p.push((k - j) as i64, g, j);
        }
    }
    Ok(p)
}

/// Generators of `W_0 V~^{k+alpha} = sum_j (J_f)^{k-j} O^{>alpha+j-|w|}`.
pub fn whom_micromult_ideal(germ: &QuasiHomogeneousGerm, alpha: &Rational, k: u32) -> Result<Vec<Polynomial>, WhomError> {
    check_alpha(alpha)?;
    let dim = germ.dim();
    let partials: Vec<Polynomial> = (0..dim).map(|i| germ.f.partial(i)).collect();
    let total = germ.w.total();
    let mut gens = Vec::new();
    for j in 0..=k {
        let gamma = alpha + int(j as i64) - &total;
        let ideal = germ.graded(&gamma, true);
        for gamma_vec in Monomial::all_up_to(dim, k - j) {
            if gamma_vec.degree() != k - j {
                continue;
            }
            let mut jac = Polynomial::one(dim);
            for (i, &e) in gamma_vec.exps().iter().enumerate() {
                jac = jac.mul(&partials[i].pow(e));
            }
            if jac.is_zero() {
                continue;
            }
            for g in ideal.generators() {
                gens.push(jac.mul_monomial(g));
            }
        }
    }
    Ok(gens)
}

/// An ideal given by generators is the unit ideal near the origin exactly when
/// some generator does not vanish there.
pub fn is_unit_at_origin(gens: &[Polynomial]) -> bool {
    gens.iter().any(|g| !g.constant_term().is_zero())
}
