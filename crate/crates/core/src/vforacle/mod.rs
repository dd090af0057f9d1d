//! Bounded verification inside the graph embedding `O[dt]`: spans, membership with
//! witnesses, functional equations, candidate `V`-filtrations and formula cross-checks.

mod bfun;
mod candidates;
mod crosscheck;
mod element;
mod span;
#[cfg(test)]
mod tests;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::exactalg::{binomial, int, Polynomial, Rational};
use crate::weyl::{pochhammer, PowerSection, WeylOperator};

pub use bfun::{verify_bfunction, BfunctionCertificate, DivisorCheck};
pub use candidates::{
    candidate_v_snc, candidate_v_whom, kernel_filtration_check, verify_v_axioms, AxiomCheck, AxiomKind, AxiomReport,
    DropGenerator, SncFamily, VFamily, WhomFamily,
};
pub use crosscheck::{
    main_formula_crosscheck, presentation_sources, presentations_equal, CrosscheckReport, CrosscheckSource,
    TwoSided,
};
pub use element::{act, act_weyl, bf_derivatives, s_shift_power, BfAction, BfElement};
pub use span::{
    bf_membership_many, evaluate_bf_witness, m_containment, membership, truncated_span, BfGenerator, MSource,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    /// `d_i` was applied to an element with a nonzero twist.
    TwistedDerivative,
    OutsideWindow { t_order: u32, bound: u32 },
    /// A coefficient of the shifted element is not regular along `f`.
    PoleNotCleared,
    TwistMismatch,
    /// A witness failed to re-evaluate to the tested element.
    WitnessMismatch,
    EmptyBFunction,
    Unsupported(String),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TwistedDerivative => f.write_str("x-derivatives need an untwisted element"),
            OracleError::OutsideWindow { t_order, bound } => {
                write!(f, "element exceeds window: dt-order {t_order} > {bound}")
            }
            OracleError::PoleNotCleared => f.write_str("shifted element has a pole along f"),
            OracleError::TwistMismatch => f.write_str("sections do not differ by integral powers of f"),
            OracleError::WitnessMismatch => f.write_str("witness does not re-evaluate to the element"),
            OracleError::EmptyBFunction => f.write_str("b-function has no roots"),
            OracleError::Unsupported(m) => write!(f, "unsupported input: {m}"),
        }
    }
}

/// Truncation bounds: operator order, x-degree and dt-order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub order: u32,
    pub xdeg: u32,
    pub dt_order: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { order: 4, xdeg: 12, dt_order: 6 }
    }
}

impl Bounds {
    pub fn new(order: u32, xdeg: u32, dt_order: u32) -> Self {
        Bounds { order, xdeg, dt_order }
    }

    pub fn doubled(&self) -> Bounds {
        Bounds { order: self.order * 2, xdeg: self.xdeg * 2, dt_order: self.dt_order * 2 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Member,
    NotFoundAtBound,
    Refuted,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Member => "member",
            Verdict::NotFoundAtBound => "not-found-at-bound",
            Verdict::Refuted => "refuted",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `operator . generator[generator]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTerm {
    pub generator: usize,
    pub operator: WeylOperator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanCertificate {
    pub verdict: Verdict,
    pub bounds: Bounds,
    /// One witness per tested element, each a combination of generators.
    pub witnesses: Vec<Vec<WitnessTerm>>,
    pub note: Option<String>,
}

impl SpanCertificate {
    pub fn member(bounds: Bounds, witnesses: Vec<Vec<WitnessTerm>>) -> Self {
        SpanCertificate { verdict: Verdict::Member, bounds, witnesses, note: None }
    }

    pub fn not_found(bounds: Bounds, note: String) -> Self {
        SpanCertificate { verdict: Verdict::NotFoundAtBound, bounds, witnesses: Vec::new(), note: Some(note) }
    }

    pub fn refuted(bounds: Bounds, note: String) -> Self {
        SpanCertificate { verdict: Verdict::Refuted, bounds, witnesses: Vec::new(), note: Some(note) }
    }

    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }
}

/// `psi_{-beta}(sum g_j dt^j) = sum g_j Q_j(beta) f^{-j-beta}` as `(Q_j(beta) g_j, j)` pairs;
/// zero images are dropped. The twist of `u` adds to the exponent.
pub fn psi_map(u: &BfElement, beta: &Rational) -> Vec<(Polynomial, u32)> {
    u.layers()
        .iter()
        .map(|(&j, g)| (g.scale(&pochhammer(beta, j)), j))
        .filter(|(g, _)| !g.is_zero())
        .collect()
}

/// `psi_{-beta}(u)` as one section over `f^{-twist-beta-top}`.
pub fn psi_section(u: &BfElement, beta: &Rational, f: &Polynomial) -> PowerSection {
    let parts = psi_map(u, beta);
    let top = parts.iter().map(|(_, j)| *j).max().unwrap_or(0);
    let mut numerator = Polynomial::zero(f.dim());
    for (g, j) in parts {
        numerator = numerator.add(&g.mul(&f.pow(top - j)));
    }
    let exponent = -(u.twist() + beta + int(top as i64));
    PowerSection::new(numerator, exponent)
}

/// The shift `sum_i g_i f^{-alpha} dt^i -> sum_i sum_{j>=i} C(j,i) Q_{j-i}(-alpha) g_j f^{i-j} dt^i`
/// from twist `alpha` to twist zero; fails unless every coefficient is regular.
pub fn phi_shift(u: &BfElement, f: &Polynomial) -> Result<BfElement, OracleError> {
    let alpha = u.twist().clone();
    let top = u.t_order().unwrap_or(0);
    let mut out = BfElement::zero(u.dim());
    for i in 0..=top {
        // Numerator over f^{top-i}.
        let mut num = Polynomial::zero(u.dim());
        for j in i..=top {
            let g = u.get(j);
            if g.is_zero() {
                continue;
            }
            let c = binomial(j, i) * pochhammer(&-alpha.clone(), j - i);
            if c.is_zero() {
                continue;
            }
            num = num.add(&g.mul(&f.pow(top - j)).scale(&c));
        }
        let coeff = if top == i || num.is_zero() {
            num
        } else {
            num.exact_div(&f.pow(top - i)).ok_or(OracleError::PoleNotCleared)?
        };
        out.add_layer(i, coeff);
    }
    Ok(out)
}
