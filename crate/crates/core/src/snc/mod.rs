//! Closed forms for a simple normal crossing monomial `f = prod x_i^{a_i}`:
//! top weight, `F_0` of every weight piece, Hodge pieces, multiplier and
//! adjoint ideals, and the monomials `f^{(lambda)}` describing the V-filtration.

mod presentation;

use alloc::vec::Vec;
use core::fmt;

use num_traits::Signed;

use crate::exactalg::{ceil_i64, floor_i64, int, is_integer, Monomial, MonomialIdeal, Polynomial, Rational};

pub use presentation::{HodgePresentation, Summand};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SncError {
    ConstantFunction,
    NonPositiveAlpha(Rational),
    LevelOutOfRange { l: u32, top: u32 },
    NoIntegralComponent,
    BadStratum(usize),
}

impl fmt::Display for SncError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SncError::ConstantFunction => f.write_str("all exponents are zero"),
            SncError::NonPositiveAlpha(a) => write!(f, "alpha = {a} must be positive"),
            SncError::LevelOutOfRange { l, top } => {
                write!(f, "weight level l = {l} exceeds the top level {top}")
            }
            SncError::NoIntegralComponent => {
                f.write_str("no component has alpha * a_i integral, so there is no adjoint level")
            }
            SncError::BadStratum(i) => write!(f, "stratum index {i} is out of range"),
        }
    }
}

/// The monomial `prod x_i^{a_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SncDivisor {
    exponents: Vec<u32>,
}

impl SncDivisor {
    pub fn new(exponents: Vec<u32>) -> Result<Self, SncError> {
        if exponents.iter().all(|&a| a == 0) {
            return Err(SncError::ConstantFunction);
        }
        Ok(SncDivisor { exponents })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn f(&self) -> Polynomial {
        Polynomial::monomial(Monomial(self.exponents.clone()))
    }

    /// Keeps only the listed components (zero-based); the other exponents become zero.
    pub fn restrict(&self, keep: &[usize]) -> Result<SncDivisor, SncError> {
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.dim()) {
            return Err(SncError::BadStratum(bad));
        }
        let exponents = (0..self.dim()).map(|i| if keep.contains(&i) { self.exponents[i] } else { 0 }).collect();
        SncDivisor::new(exponents)
    }

    fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(|&i| self.exponents[i] > 0)
    }

    /// `I_lambda = { i : a_i > 0, lambda a_i integral }`.
    pub fn integral_indices(&self, lambda: &Rational) -> Vec<usize> {
        self.support()
            .filter(|&i| is_integer(&(lambda * int(self.exponents[i] as i64))))
            .collect()
    }

    pub fn m_alpha(&self, alpha: &Rational) -> u32 {
        self.integral_indices(alpha).len() as u32
    }

    /// `f^{(lambda)} = prod x_i^{ceil(lambda a_i) - 1}`, negative exponents read as zero.
    pub fn f_lambda(&self, lambda: &Rational) -> Monomial {
        Monomial(
            self.exponents
                .iter()
                .map(|&a| (ceil_i64(&(lambda * int(a as i64))) - 1).max(0) as u32)
                .collect(),
        )
    }

    /// `f^{(lambda + epsilon)}` for small `epsilon > 0`: exponents `floor(lambda a_i)`.
    pub fn f_lambda_plus(&self, lambda: &Rational) -> Monomial {
        Monomial(
            self.exponents
                .iter()
                .map(|&a| floor_i64(&(lambda * int(a as i64))).max(0) as u32)
                .collect(),
        )
    }

    /// Generators `f^{(lambda)} prod_{i in I_lambda \ J} x_i` over `J ⊆ I_lambda`, `|J| = l`,
    /// of the kernel piece `K_l V^lambda` for `lambda > 0`.
    pub fn kernel_generators(&self, lambda: &Rational, l: u32) -> Vec<Monomial> {
        let base = self.f_lambda(lambda);
        let idx = self.integral_indices(lambda);
        subsets(&idx, l as usize)
            .into_iter()
            .map(|j| {
                let mut e = base.0.clone();
                for &i in &idx {
                    if !j.contains(&i) {
                        e[i] += 1;
                    }
                }
                Monomial(e)
            })
            .collect()
    }
}

fn check_alpha(alpha: &Rational) -> Result<(), SncError> {
    if alpha.is_positive() {
        Ok(())
    } else {
        Err(SncError::NonPositiveAlpha(alpha.clone()))
    }
}

pub(crate) fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return alloc::vec![Vec::new()];
    }
    if items.len() < size {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (pos, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[pos + 1..], size - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Top weight offset `m_alpha`: `W_{n + m_alpha}` is the whole module.
pub fn snc_weight_top(d: &SncDivisor, alpha: &Rational) -> Result<u32, SncError> {
    check_alpha(alpha)?;
    Ok(d.m_alpha(alpha))
}

/// The ideal `I_l` with `F_0 W_{n+l} = I_l f^{-alpha}`.
pub fn snc_f0_ideal(d: &SncDivisor, alpha: &Rational, l: u32) -> Result<MonomialIdeal, SncError> {
    check_alpha(alpha)?;
    let ia = d.integral_indices(alpha);
    let top = ia.len() as u32;
    if l > top {
        return Err(SncError::LevelOutOfRange { l, top });
    }
    let ceil: Vec<u32> = d
        .exponents
        .iter()
        .map(|&a| ceil_i64(&(alpha * int(a as i64))).max(0) as u32)
        .collect();
    let gens = subsets(&ia, l as usize).into_iter().map(|j| {
        Monomial(
            (0..d.dim())
                .map(|i| {
                    let c = ceil[i];
                    if d.exponents[i] == 0 {
                        0
                    } else if ia.contains(&i) && !j.contains(&i) {
                        c
                    } else {
                        c - 1
                    }
                })
                .collect(),
        )
    });
    Ok(MonomialIdeal::new(d.dim(), gens))
}

/// `F_k W_{n+l} = F_k D . I_l f^{-alpha}`.
pub fn snc_hodge_weight(d: &SncDivisor, alpha: &Rational, k: u32, l: u32) -> Result<HodgePresentation, SncError> {
    let ideal = snc_f0_ideal(d, alpha, l)?;
    let mut p = HodgePresentation::new(alpha.clone());
    for g in ideal.generator_polys() {
        p.push(k as i64, g, 0);
    }
    Ok(p)
}

/// `prod x_i^{floor(alpha a_i)}`.
pub fn snc_multiplier_ideal(d: &SncDivisor, alpha: &Rational) -> Result<MonomialIdeal, SncError> {
    check_alpha(alpha)?;
    Ok(MonomialIdeal::new(d.dim(), [d.f_lambda_plus(alpha)]))
}

/// The ideal `I_1`, defined when some `alpha a_i` is integral.
pub fn snc_adjoint_specialization(d: &SncDivisor, alpha: &Rational) -> Result<MonomialIdeal, SncError> {
    check_alpha(alpha)?;
    if d.m_alpha(alpha) == 0 {
        return Err(SncError::NoIntegralComponent);
    }
    snc_f0_ideal(d, alpha, 1)
}

#[cfg(test)]
mod tests;
