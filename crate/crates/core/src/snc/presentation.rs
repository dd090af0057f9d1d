use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::exactalg::{int, Polynomial, Rational};
use crate::weyl::{power_derivatives, PowerSection};

/// One summand `F_k D . g f^{-j-alpha}`; a budget of `None` means all of `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub budget: Option<u32>,
    pub generator: Polynomial,
    pub pole_step: u32,
}

/// `sum_j F_{k_j} D . g_j f^{-j-alpha}` inside `O(*f) f^{-alpha}`.
///
/// A span-closed presentation lists vectors whose linear span already is the
/// (truncated) module, so no operators need to be applied to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgePresentation {
    pub twist: Rational,
    pub summands: Vec<Summand>,
    pub span_closed: bool,
}

impl HodgePresentation {
    pub fn new(twist: Rational) -> Self {
        HodgePresentation { twist, summands: Vec::new(), span_closed: false }
    }

    /// Adds `F_budget D . g f^{-j-alpha}`; negative budgets contribute nothing.
    pub fn push(&mut self, budget: i64, generator: Polynomial, pole_step: u32) {
        if budget >= 0 && !generator.is_zero() {
            self.summands.push(Summand { budget: Some(budget as u32), generator, pole_step });
        }
    }

    pub fn push_unbounded(&mut self, generator: Polynomial, pole_step: u32) {
        if !generator.is_zero() {
            self.summands.push(Summand { budget: None, generator, pole_step });
        }
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Whether the module equals `O f^{-k-alpha}` near the origin.
    ///
    /// Every summand generates an `O`-module spanned by `d^gamma(g f^{-j-alpha})`;
    /// the module is all of `O f^{-k-alpha}` exactly when these all sit inside it and
    /// one of their numerators over `f^{-k-alpha}` is a unit at the origin.
    pub fn is_full_pole_piece(&self, f: &Polynomial, k: u32) -> bool {
        let target = -(&self.twist + int(k as i64));
        let mut unit = false;
        for s in &self.summands {
            let Some(b) = s.budget else { return false };
            let base = PowerSection::new(s.generator.clone(), -(&self.twist + int(s.pole_step as i64)));
            for sec in power_derivatives(f, &base, b).values() {
                if sec.numerator.is_zero() {
                    continue;
                }
                let sec = sec.reduced(f);
                match sec.numerator_at(f, &target) {
                    Some(h) => unit |= !h.constant_term().is_zero(),
                    None => return false,
                }
            }
        }
        unit
    }
}

impl fmt::Display for HodgePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("0");
        }
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match s.budget {
                Some(b) => write!(f, "F_{b}D")?,
                None => f.write_str("D")?,
            }
            write!(f, "({}) f^(-{}-{})", s.generator, s.pole_step, self.twist)?;
        }
        Ok(())
    }
}
