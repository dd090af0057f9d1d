//! Bounded spans `{ x^beta d^gamma . g }` and exact membership with witnesses.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::exactalg::linalg::{Combination, EchelonSpan, SparseVec};
use crate::exactalg::{Monomial, Polynomial, Rational};
use crate::weyl::{apply_to_power, power_derivatives, PowerSection, WeylMonomial, WeylOperator};

use super::element::{act_weyl, bf_derivatives, BfElement};
use super::{psi_section, Bounds, OracleError, SpanCertificate, WitnessTerm};

/// Span of labelled vectors; each vector is `(monomial operator) . (generator i)`.
pub(crate) struct LabeledSpan<K: Ord + Clone> {
    span: EchelonSpan<K>,
    labels: Vec<(usize, WeylMonomial)>,
}

impl<K: Ord + Clone> LabeledSpan<K> {
    pub(crate) fn new() -> Self {
        LabeledSpan { span: EchelonSpan::new(true), labels: Vec::new() }
    }

    pub(crate) fn push(&mut self, generator: usize, op: WeylMonomial, v: SparseVec<K>) {
        self.labels.push((generator, op));
        self.span.insert(v);
    }

    pub(crate) fn len(&self) -> usize {
        self.labels.len()
    }

    /// Witness terms for `v`, or `None` if `v` is outside the span.
    pub(crate) fn solve(&self, v: &SparseVec<K>) -> Option<Vec<WitnessTerm>> {
        let (rem, combo) = self.span.reduce(v);
        if !rem.is_empty() {
            return None;
        }
        Some(self.witness(&combo))
    }

    pub(crate) fn witness(&self, combo: &Combination) -> Vec<WitnessTerm> {
        let mut by_gen: BTreeMap<usize, WeylOperator> = BTreeMap::new();
        for (&idx, c) in combo {
            let (g, m) = &self.labels[idx];
            by_gen
                .entry(*g)
                .or_insert_with(|| WeylOperator::zero(m.dim()))
                .add_term(m.clone(), c.clone());
        }
        by_gen
            .into_iter()
            .filter(|(_, op)| !op.is_zero())
            .map(|(generator, operator)| WitnessTerm { generator, operator })
            .collect()
    }
}

/// A generator of a bounded `D_X`-span in the graph embedding, with an operator-order budget
/// (`None`: the global order bound).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfGenerator {
    pub element: BfElement,
    pub budget: Option<u32>,
}

impl BfGenerator {
    pub fn new(element: BfElement, budget: Option<u32>) -> Self {
        BfGenerator { element, budget }
    }
}

pub(crate) fn d_part(dim: usize, gamma: &Monomial, beta: &Monomial) -> WeylMonomial {
    debug_assert_eq!(gamma.dim(), dim);
    WeylMonomial { x: beta.clone(), d: gamma.clone(), s: 0 }
}

/// `span{ x^beta d^gamma g : |gamma| <= budget, |beta| <= xdeg }`.
pub(crate) fn bf_span(gens: &[BfGenerator], f: &Polynomial, bounds: &Bounds) -> LabeledSpan<(u32, Monomial)> {
    let dim = f.dim();
    let xs = Monomial::all_up_to(dim, bounds.xdeg);
    let mut span = LabeledSpan::new();
    for (i, g) in gens.iter().enumerate() {
        let b = g.budget.unwrap_or(bounds.order).min(bounds.order);
        for (gamma, dg) in bf_derivatives(&g.element, f, b) {
            if dg.is_zero() {
                continue;
            }
            for beta in &xs {
                span.push(i, d_part(dim, &gamma, beta), dg.mul_monomial(beta).to_vector());
            }
        }
    }
    span
}

/// Re-evaluates `sum_i P_i g_i` in the graph embedding.
pub fn evaluate_bf_witness(witness: &[WitnessTerm], gens: &[BfGenerator], f: &Polynomial) -> Result<BfElement, OracleError> {
    let mut out = BfElement::zero(f.dim());
    for w in witness {
        out = out.add(&act_weyl(&w.operator, &gens[w.generator].element, f)?);
    }
    Ok(out)
}

fn lowest_layer(u: &BfElement) -> Option<u32> {
    u.layers().keys().next().copied()
}

/// Membership of several elements in one bounded span of the graph embedding.
pub fn bf_membership_many(
    elements: &[BfElement],
    gens: &[BfGenerator],
    f: &Polynomial,
    bounds: &Bounds,
) -> Result<SpanCertificate, OracleError> {
    for u in elements {
        if u.t_order().unwrap_or(0) > bounds.dt_order {
            return Err(OracleError::OutsideWindow { t_order: u.t_order().unwrap_or(0), bound: bounds.dt_order });
        }
        if !u.twist().is_zero() {
            return Err(OracleError::TwistedDerivative);
        }
    }
    // D_X never lowers the dt-layer, so a layer below every generator refutes membership.
    let floor = gens.iter().filter_map(|g| lowest_layer(&g.element)).min();
    for (idx, u) in elements.iter().enumerate() {
        if let Some(low) = lowest_layer(u) {
            if floor.map_or(true, |fl| low < fl) {
                return Ok(SpanCertificate::refuted(
                    *bounds,
                    alloc::format!("element {idx} has a dt-layer below every generator"),
                ));
            }
        }
    }
    let span = bf_span(gens, f, bounds);
    let mut witnesses = Vec::new();
    for (idx, u) in elements.iter().enumerate() {
        match span.solve(&u.to_vector()) {
            Some(w) => {
                let back = evaluate_bf_witness(&w, gens, f)?;
                if back != *u {
                    return Err(OracleError::WitnessMismatch);
                }
                witnesses.push(w);
            }
            None => {
                return Ok(SpanCertificate::not_found(
                    *bounds,
                    alloc::format!("element {idx} not reached among {} spanning vectors", span.len()),
                ))
            }
        }
    }
    Ok(SpanCertificate::member(*bounds, witnesses))
}

/// Whether `u` lies in `span{ x^beta d^gamma g_i }` within the bounds.
pub fn membership(u: &BfElement, gens: &[BfGenerator], f: &Polynomial, bounds: &Bounds) -> Result<SpanCertificate, OracleError> {
    bf_membership_many(core::slice::from_ref(u), gens, f, bounds)
}

/// Echelon basis of the bounded span, as elements.
pub fn truncated_span(gens: &[BfGenerator], f: &Polynomial, bounds: &Bounds) -> Vec<BfElement> {
    let span = bf_span(gens, f, bounds);
    span.span
        .basis()
        .into_iter()
        .map(|v| {
            let mut u = BfElement::zero(f.dim());
            for ((j, m), c) in v {
                u.add_layer(j, Polynomial::term(c, m));
            }
            u
        })
        .collect()
}

/// How a generator of a module inside `O(*f) f^{-alpha}` produces its vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MSource {
    /// `F_budget D . g f^{c}` (`None`: the global order bound, tested on the generator alone).
    Generated { section: PowerSection, budget: Option<u32> },
    /// `F_budget D_X . u` in the graph embedding, pushed forward by `psi_{-beta}`.
    Psi { element: BfElement, beta: Rational, budget: u32 },
    /// A single vector whose span is already closed under the relevant operators.
    Closed { section: PowerSection },
}

impl MSource {
    /// `(operator, section)` pairs: the elements to test and, before multiplying by
    /// `x^beta`, the spanning vectors.
    fn images(&self, f: &Polynomial, order_cap: u32) -> Vec<(Monomial, PowerSection)> {
        let dim = f.dim();
        match self {
            MSource::Generated { section, budget } => {
                let b = budget.unwrap_or(order_cap).min(order_cap);
                power_derivatives(f, section, b).into_iter().collect()
            }
            MSource::Psi { element, beta, budget } => bf_derivatives(element, f, (*budget).min(order_cap))
                .into_iter()
                .map(|(g, u)| (g, psi_section(&u, beta, f)))
                .collect(),
            MSource::Closed { section } => alloc::vec![(Monomial::one(dim), section.clone())],
        }
    }

    fn test_images(&self, f: &Polynomial) -> Vec<(Monomial, PowerSection)> {
        match self {
            // D-modules: containment of generators suffices.
            MSource::Generated { budget: None, section } => alloc::vec![(Monomial::one(f.dim()), section.clone())],
            _ => self.images(f, u32::MAX),
        }
    }

    fn is_closed(&self) -> bool {
        matches!(self, MSource::Closed { .. })
    }

    fn evaluate(&self, op: &WeylOperator, f: &Polynomial) -> Result<PowerSection, OracleError> {
        match self {
            MSource::Generated { section, .. } => Ok(apply_to_power(op, f, section)),
            MSource::Psi { element, beta, .. } => Ok(psi_section(&act_weyl(op, element, f)?, beta, f)),
            MSource::Closed { section } => {
                let c = op.as_polynomial().ok_or(OracleError::WitnessMismatch)?;
                Ok(PowerSection::new(section.numerator.mul(&c), section.exponent.clone()))
            }
        }
    }
}

fn lowest_exponent<'a>(secs: impl IntoIterator<Item = &'a PowerSection>) -> Option<Rational> {
    secs.into_iter().filter(|s| !s.numerator.is_zero()).map(|s| s.exponent.clone()).min()
}

/// Containment of the module generated by `tested` in the bounded span of `container`.
pub fn m_containment(
    tested: &[MSource],
    container: &[MSource],
    f: &Polynomial,
    bounds: &Bounds,
) -> Result<SpanCertificate, OracleError> {
    let dim = f.dim();
    let tests: Vec<(usize, Monomial, PowerSection)> = tested
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.test_images(f).into_iter().map(move |(g, p)| (i, g, p)))
        .filter(|(_, _, p)| !p.numerator.is_zero())
        .collect();
    let spans: Vec<(usize, Monomial, PowerSection)> = container
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.images(f, bounds.order).into_iter().map(move |(g, p)| (i, g, p)))
        .filter(|(_, _, p)| !p.numerator.is_zero())
        .collect();
    let Some(target) = lowest_exponent(tests.iter().chain(&spans).map(|t| &t.2)) else {
        return Ok(SpanCertificate::member(*bounds, Vec::new()));
    };
    let xs = Monomial::all_up_to(dim, bounds.xdeg);
    let mut span: LabeledSpan<Monomial> = LabeledSpan::new();
    for (i, gamma, sec) in &spans {
        let base = sec.numerator_at(f, &target).ok_or(OracleError::TwistMismatch)?;
        if container[*i].is_closed() {
            span.push(*i, d_part(dim, gamma, &Monomial::one(dim)), base.into_terms());
        } else {
            for beta in &xs {
                span.push(*i, d_part(dim, gamma, beta), base.mul_monomial(beta).into_terms());
            }
        }
    }
    let mut witnesses = Vec::new();
    for (n, (i, gamma, sec)) in tests.iter().enumerate() {
        let v = sec.numerator_at(f, &target).ok_or(OracleError::TwistMismatch)?;
        match span.solve(&v.clone().into_terms()) {
            Some(w) => {
                let mut back = Polynomial::zero(dim);
                for term in &w {
                    let image = container[term.generator].evaluate(&term.operator, f)?;
                    back = back.add(&image.numerator_at(f, &target).ok_or(OracleError::TwistMismatch)?);
                }
                if back != v {
                    return Err(OracleError::WitnessMismatch);
                }
                witnesses.push(w);
            }
            None => {
                let msg: String = alloc::format!(
                    "tested element {n} (generator {i}, d^{gamma}) not reached among {} spanning vectors",
                    span.len()
                );
                return Ok(SpanCertificate::not_found(*bounds, msg));
            }
        }
    }
    Ok(SpanCertificate::member(*bounds, witnesses))
}
