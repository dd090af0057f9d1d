use alloc::vec::Vec;

use crate::exactalg::{int, Polynomial, Rational};
use crate::snc::{snc_hodge_weight, snc_weight_top, HodgePresentation, SncDivisor};
use crate::weyl::PowerSection;
use crate::whom::{whom_hodge_weight, whom_weight_top, QuasiHomogeneousGerm};

use super::candidates::{kernel_filtration_check, SncFamily, VFamily, WhomFamily};
use super::element::{act, BfAction, BfElement};
use super::span::{m_containment, BfGenerator, MSource};
use super::{Bounds, OracleError, SpanCertificate, Verdict};

/// Containment in both directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSided {
    pub forward: SpanCertificate,
    pub backward: SpanCertificate,
}

impl TwoSided {
    pub fn both_member(&self) -> bool {
        self.forward.is_member() && self.backward.is_member()
    }

    /// `member` when both directions are, otherwise the weaker of the two verdicts.
    pub fn verdict(&self) -> Verdict {
        match (self.forward.verdict, self.backward.verdict) {
            (Verdict::Member, Verdict::Member) => Verdict::Member,
            (Verdict::Refuted, _) | (_, Verdict::Refuted) => Verdict::Refuted,
            _ => Verdict::NotFoundAtBound,
        }
    }
}

/// The summands of a presentation as sources of bounded spans.
pub fn presentation_sources(p: &HodgePresentation) -> Vec<MSource> {
    p.summands
        .iter()
        .map(|s| {
            let section = PowerSection::new(s.generator.clone(), -(&p.twist + int(s.pole_step as i64)));
            if p.span_closed {
                MSource::Closed { section }
            } else {
                MSource::Generated { section, budget: s.budget }
            }
        })
        .collect()
}

/// Two-sided bounded containment between the modules two presentations denote.
pub fn presentations_equal(
    p1: &HodgePresentation,
    p2: &HodgePresentation,
    f: &Polynomial,
    bounds: &Bounds,
) -> Result<TwoSided, OracleError> {
    let a = presentation_sources(p1);
    let b = presentation_sources(p2);
    Ok(TwoSided { forward: m_containment(&a, &b, f, bounds)?, backward: m_containment(&b, &a, f, bounds)? })
}

#[derive(Clone, Debug)]
pub enum CrosscheckSource {
    Snc(SncDivisor),
    Whom(QuasiHomogeneousGerm),
}

impl CrosscheckSource {
    pub fn f(&self) -> Polynomial {
        match self {
            CrosscheckSource::Snc(d) => d.f(),
            CrosscheckSource::Whom(g) => g.f().clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckReport {
    /// `(s + alpha)^l` maps every kernel candidate into `V^{>alpha}`.
    pub kernel: SpanCertificate,
    /// `psi_{-alpha}(F_k K_l V^alpha)` against the closed form.
    pub images: TwoSided,
    pub closed_form: HodgePresentation,
    pub kernel_generators: Vec<BfGenerator>,
}

impl CrosscheckReport {
    pub fn verdict(&self) -> Verdict {
        match (self.kernel.verdict, self.images.verdict()) {
            (Verdict::Member, v) => v,
            (Verdict::Refuted, _) | (_, Verdict::Refuted) => Verdict::Refuted,
            _ => Verdict::NotFoundAtBound,
        }
    }
}

fn layer_gens(gens: Vec<Polynomial>, j: u32, budget: u32) -> impl Iterator<Item = BfGenerator> {
    gens.into_iter().map(move |g| BfGenerator::new(BfElement::layer(g, j), Some(budget)))
}

/// Generators of `F_k K_l V^alpha` and the closed-form `F_k W_{n+l}` for `alpha` in `(0, 1]`.
fn kernel_side(
    source: &CrosscheckSource,
    alpha: &Rational,
    k: u32,
    l: u32,
) -> Result<(Vec<BfGenerator>, HodgePresentation), OracleError> {
    let unsupported = |e: &dyn core::fmt::Display| OracleError::Unsupported(alloc::format!("{e}"));
    match source {
        CrosscheckSource::Snc(d) => {
            let top = snc_weight_top(d, alpha).map_err(|e| unsupported(&e))?;
            let l = l.min(top);
            let gens = d.kernel_generators(alpha, l).into_iter().map(Polynomial::monomial).collect();
            let closed = snc_hodge_weight(d, alpha, k, l).map_err(|e| unsupported(&e))?;
            Ok((layer_gens(gens, 0, k).collect(), closed))
        }
        CrosscheckSource::Whom(germ) => {
            let top = whom_weight_top(alpha).map_err(|e| unsupported(&e))?;
            let closed = whom_hodge_weight(germ, alpha, k, l).map_err(|e| unsupported(&e))?;
            let total = germ.weights().total();
            let f = germ.f();
            let one = int(1);
            let mut gens = Vec::new();
            for j in 0..=k {
                let (gamma, strict, with_t) = if *alpha == one && l == 0 {
                    (int(j as i64) - &total, true, true)
                } else {
                    (alpha + int(j as i64) - &total, l < top, false)
                };
                for g in germ.graded(&gamma, strict).generator_polys() {
                    let mut e = BfElement::layer(g, j);
                    if with_t {
                        e = act(BfAction::T, &e, f)?;
                    }
                    gens.push(BfGenerator::new(e, Some(k - j)));
                }
            }
            Ok((gens, closed))
        }
    }
}

/// Compares `psi_{-alpha}(F_k K_l V^alpha)` with the closed-form Hodge/weight piece in both
/// directions, after certifying that the kernel candidates satisfy the kernel condition.
pub fn main_formula_crosscheck(
    source: &CrosscheckSource,
    alpha: &Rational,
    k: u32,
    l: u32,
    bounds: &Bounds,
) -> Result<CrosscheckReport, OracleError> {
    let f = source.f();
    let (kernel_generators, closed_form) = kernel_side(source, alpha, k, l)?;
    let jmax = bounds.dt_order;
    let strict = match source {
        CrosscheckSource::Snc(d) => SncFamily::new(d.clone()).generators(alpha, true, jmax),
        CrosscheckSource::Whom(g) => WhomFamily::new(g.clone()).generators(alpha, true, jmax),
    };
    let kernel = kernel_filtration_check(&f, alpha, l, &kernel_generators, &strict, bounds)?;
    let images: Vec<MSource> = kernel_generators
        .iter()
        .map(|g| MSource::Psi { element: g.element.clone(), beta: alpha.clone(), budget: g.budget.unwrap_or(bounds.order) })
        .collect();
    let closed = presentation_sources(&closed_form);
    let two = TwoSided { forward: m_containment(&images, &closed, &f, bounds)?, backward: m_containment(&closed, &images, &f, bounds)? };
    Ok(CrosscheckReport { kernel, images: two, closed_form, kernel_generators })
}
