//! Weight and Hodge pieces of `O(*f) f^{-alpha}` for Euler-homogeneous divisors from an
//! annihilator presentation: the ideal `Gamma`, its weighted sub-ideals, and bounded
//! syzygy and intersection computations.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::bsdata::{beta_factor, roots_in_interval, BFunction, Interval, RootMultiset};
use crate::exactalg::linalg::{EchelonSpan, Insertion, SparseVec};
use crate::exactalg::{int, Monomial, Polynomial, Rational};
use crate::snc::HodgePresentation;
use crate::vforacle::Bounds;
use crate::weyl::{
    apply_to_power, apply_to_twisted, bounded_operator_basis, power_derivatives, syzygy_kernel, PowerSection,
    TwistedSection, WeylMonomial, WeylOperator,
};

#[cfg(test)]
mod tests;

/// One failed hypothesis on an [`AnnihilatorInput`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputViolation {
    NegativeAlpha,
    DimensionMismatch,
    EulerNotFirstOrder,
    EulerInvolvesS,
    /// `E(f) != f`.
    EulerDoesNotFixF,
    AnnihilatorInvolvesS(usize),
    /// The operator does not kill `f^{s-1}`.
    NotAnAnnihilator(usize),
    /// Some root of `b` lies outside `(-2-alpha, -alpha)`.
    RootsOutsideWindow,
}

impl fmt::Display for InputViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputViolation::NegativeAlpha => f.write_str("alpha must be non-negative"),
            InputViolation::DimensionMismatch => f.write_str("operators and f live in different dimensions"),
            InputViolation::EulerNotFirstOrder => f.write_str("the Euler field must be a vector field of order one"),
            InputViolation::EulerInvolvesS => f.write_str("the Euler field must not involve s"),
            InputViolation::EulerDoesNotFixF => f.write_str("the Euler field does not satisfy E(f) = f"),
            InputViolation::AnnihilatorInvolvesS(i) => write!(f, "annihilator {} involves s", i + 1),
            InputViolation::NotAnAnnihilator(i) => write!(f, "annihilator {} does not kill f^(s-1)", i + 1),
            InputViolation::RootsOutsideWindow => {
                f.write_str("the roots of b must lie strictly between -2-alpha and -alpha")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PpdError {
    Input(Vec<InputViolation>),
    /// Weight levels need `l` below the multiplicity of `-alpha-1` in `b`.
    LevelTooHigh { l: u32, multiplicity: u32 },
    /// Hodge pieces with `k >= 1` need parametric primality to be asserted.
    PrimalityNotAsserted,
    /// The roots of `b` are not all in `(-2, -1]`, or `alpha != 0`.
    IntervalHypothesis,
    /// Nothing was found within the bounds.
    Inconclusive(String),
}

impl fmt::Display for PpdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PpdError::Input(v) => {
                f.write_str("invalid annihilator input: ")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            PpdError::LevelTooHigh { l, multiplicity } => {
                write!(f, "level {l} must be below the multiplicity {multiplicity} of -alpha-1 in b")
            }
            PpdError::PrimalityNotAsserted => {
                f.write_str("Hodge pieces with k >= 1 require the parametric primality assertion (pp: true)")
            }
            PpdError::IntervalHypothesis => f.write_str("requires alpha = 0 and all roots of b in (-2, -1]"),
            PpdError::Inconclusive(m) => write!(f, "inconclusive at bounds: {m}"),
        }
    }
}

/// `f`, an Euler field `E` with `E(f) = f`, annihilators `zeta_i` of `f^{s-1}`, the twist
/// `alpha` and the b-function. Together `zeta_i` and `E - s + 1` present `ann f^{s-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorInput {
    pub f: Polynomial,
    pub euler: WeylOperator,
    pub zetas: Vec<WeylOperator>,
    pub alpha: Rational,
    pub b: BFunction,
    /// Parametric primality, taken on trust.
    pub pp_asserted: bool,
}

/// `sum c x^beta d^gamma (g)` for an `s`-free operator.
pub fn apply_to_polynomial(op: &WeylOperator, g: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero(g.dim());
    for (m, c) in op.terms() {
        let mut h = g.clone();
        for (i, &e) in m.d.exps().iter().enumerate() {
            for _ in 0..e {
                h = h.partial(i);
            }
        }
        out = out.add(&h.mul_monomial(&m.x).scale(c));
    }
    out
}

/// Whether `zeta f^{s-1} = 0`.
pub fn check_annihilator(zeta: &WeylOperator, f: &Polynomial) -> bool {
    zeta.dim() == f.dim() && apply_to_twisted(zeta, f, &TwistedSection::power(f.dim(), -1)).is_zero()
}

impl AnnihilatorInput {
    pub fn violations(&self) -> Vec<InputViolation> {
        let mut out = Vec::new();
        let dim = self.f.dim();
        if self.alpha.is_negative() {
            out.push(InputViolation::NegativeAlpha);
        }
        if self.euler.dim() != dim || self.zetas.iter().any(|z| z.dim() != dim) {
            out.push(InputViolation::DimensionMismatch);
            return out;
        }
        if !self.euler.is_s_free() {
            out.push(InputViolation::EulerInvolvesS);
        } else {
            if self.euler.d_order() != Some(1) || self.euler.terms().keys().any(|m| m.d.degree() == 0) {
                out.push(InputViolation::EulerNotFirstOrder);
            }
            if apply_to_polynomial(&self.euler, &self.f) != self.f {
                out.push(InputViolation::EulerDoesNotFixF);
            }
        }
        for (i, z) in self.zetas.iter().enumerate() {
            if !z.is_s_free() {
                out.push(InputViolation::AnnihilatorInvolvesS(i));
            } else if !check_annihilator(z, &self.f) {
                out.push(InputViolation::NotAnAnnihilator(i));
            }
        }
        let window = Interval::open(-&self.alpha - int(2), -self.alpha.clone());
        if !roots_in_interval(self.b.roots(), &window) {
            out.push(InputViolation::RootsOutsideWindow);
        }
        out
    }

    pub fn validate(&self) -> Result<(), PpdError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(PpdError::Input(v))
        }
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    /// Multiplicity of `-alpha-1` as a root of `b`.
    pub fn top_multiplicity(&self) -> u32 {
        self.b.multiplicity(&(-&self.alpha - int(1)))
    }

    /// `E + alpha + 1`.
    fn shifted_euler(&self) -> WeylOperator {
        self.euler.add(&WeylOperator::constant(self.dim(), &self.alpha + int(1)))
    }
}

/// Half the smallest positive distance from `-alpha` to a root shifted by an integer.
pub fn epsilon(b: &RootMultiset, alpha: &Rational) -> Rational {
    let mut best = Rational::one();
    for (r, _) in b.iter() {
        let gap = -alpha - r;
        let frac = &gap - gap.floor();
        for d in [frac.clone(), Rational::one() - frac] {
            if d.is_positive() && d < best {
                best = d;
            }
        }
    }
    best / int(2)
}

/// Generators of `Gamma = D[s] f + D[s] beta(-s) + ann f^{s-1}` (level `Some(0)`: the
/// `W_0` ideal, with `beta` taken at `alpha + epsilon`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaPresentation {
    pub generators: Vec<WeylOperator>,
    pub level: Option<u32>,
    pub epsilon: Rational,
    /// The roots of `beta(s)`.
    pub beta: RootMultiset,
}

fn beta_roots(inp: &AnnihilatorInput, level: Option<u32>) -> (RootMultiset, Rational) {
    let eps = epsilon(inp.b.roots(), &inp.alpha);
    let a = if level == Some(0) { &inp.alpha + &eps } else { inp.alpha.clone() };
    (beta_factor(inp.b.roots(), &a), eps)
}

/// `prod (-x - r)^m` with `x` an operator commuting with itself.
fn beta_at(roots: &RootMultiset, x: &WeylOperator) -> WeylOperator {
    let dim = x.dim();
    let mut out = WeylOperator::one(dim);
    for (r, m) in roots.iter() {
        let factor = x.scale(&-Rational::one()).sub(&WeylOperator::constant(dim, r.clone()));
        out = out.mul(&factor.pow(m));
    }
    out
}

pub fn gamma_ideal(inp: &AnnihilatorInput, level: Option<u32>) -> Result<GammaPresentation, PpdError> {
    inp.validate()?;
    let dim = inp.dim();
    let (beta, epsilon) = beta_roots(inp, level);
    let mut generators = alloc::vec![WeylOperator::from_polynomial(&inp.f)];
    if !beta.is_empty() {
        generators.push(beta_at(&beta, &WeylOperator::s(dim)));
    }
    generators.extend(inp.zetas.iter().cloned());
    generators.push(inp.euler.sub(&WeylOperator::s(dim)).add(&WeylOperator::one(dim)));
    Ok(GammaPresentation { generators, level, epsilon, beta })
}

/// `s`-free generators of the image of `Gamma` under `s -> E + 1`; the operator `E - s + 1`
/// maps to zero and is dropped.
fn reduced_generators(inp: &AnnihilatorInput, level: Option<u32>) -> Vec<WeylOperator> {
    let dim = inp.dim();
    let (beta, _) = beta_roots(inp, level);
    let e1 = inp.euler.add(&WeylOperator::one(dim));
    let mut out = alloc::vec![WeylOperator::from_polynomial(&inp.f), beta_at(&beta, &e1)];
    out.extend(inp.zetas.iter().cloned());
    out
}

/// The result of a bounded computation: the operators found, and the sections they produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpdOutcome {
    pub presentation: HodgePresentation,
    pub operators: Vec<WeylOperator>,
    /// Computed under the parametric primality assertion.
    pub conditional: bool,
    pub epsilon: Rational,
    pub bounds: Bounds,
}

fn left_multiples(gens: &[WeylOperator], dim: usize, bounds: &Bounds) -> Vec<WeylOperator> {
    let basis = bounded_operator_basis(dim, bounds.order, bounds.xdeg, None);
    let mut out = Vec::with_capacity(gens.len() * basis.len());
    for g in gens {
        for m in &basis {
            let v = WeylOperator::monomial(m.clone()).mul(g);
            if !v.is_zero() {
                out.push(v);
            }
        }
    }
    out
}

type OrderKey = (bool, WeylMonomial);

fn order_keyed(op: &WeylOperator, k: u32) -> SparseVec<OrderKey> {
    op.terms().iter().map(|(m, c)| ((m.total_order() > k, m.clone()), c.clone())).collect()
}

fn from_keyed(v: &SparseVec<OrderKey>, dim: usize) -> WeylOperator {
    let mut op = WeylOperator::zero(dim);
    for ((_, m), c) in v {
        op.add_term(m.clone(), c.clone());
    }
    op
}

/// A basis of `span(vectors) ∩ F_k`: with high-order monomials ordered last, the echelon
/// rows whose pivot has order `<= k` span the intersection.
fn intersect_order(vectors: Vec<WeylOperator>, k: u32, dim: usize) -> Vec<WeylOperator> {
    let mut span: EchelonSpan<OrderKey> = EchelonSpan::new(false);
    for v in vectors {
        span.insert(order_keyed(&v, k));
    }
    span.basis()
        .iter()
        .filter(|v| v.keys().next_back().map_or(false, |(high, _)| !high))
        .map(|v| from_keyed(v, dim))
        .collect()
}

/// Elements `gamma` of `candidates`' span with `gamma . shift ∈ span(container)`.
fn kernel_of_shift(candidates: &[WeylOperator], shift: &WeylOperator, container: &[WeylOperator], dim: usize) -> Vec<WeylOperator> {
    let mut target: EchelonSpan<WeylMonomial> = EchelonSpan::new(false);
    for v in container {
        target.insert(v.terms().clone());
    }
    let mut rems: EchelonSpan<WeylMonomial> = EchelonSpan::new(true);
    let mut out = Vec::new();
    for c in candidates {
        let (rem, _) = target.reduce(c.mul(shift).terms());
        if let Insertion::Dependent(combo) = rems.insert(rem) {
            let mut g = WeylOperator::zero(dim);
            for (idx, coef) in combo {
                g = g.add(&candidates[idx].scale(&coef));
            }
            if !g.is_zero() {
                out.push(g);
            }
        }
    }
    out
}

/// Keeps a section only when it is not already in the bounded span of
/// `x^beta d^gamma` (`|gamma| <= derivs`) applied to the ones kept before it.
fn prune_sections(secs: Vec<PowerSection>, f: &Polynomial, bounds: &Bounds, derivs: u32) -> Vec<PowerSection> {
    let dim = f.dim();
    let secs: Vec<PowerSection> = secs.into_iter().filter(|s| !s.numerator.is_zero()).map(|s| s.reduced(f)).collect();
    let Some(low) = secs.iter().map(|s| s.exponent.clone()).min() else {
        return Vec::new();
    };
    let target = &low - int(derivs as i64);
    let lift = |s: &PowerSection| s.numerator_at(f, &target).expect("exponents differ by integers");
    let mut order: Vec<(Polynomial, PowerSection)> = secs.iter().map(|s| (lift(s), s.clone())).collect();
    order.sort_by(|a, b| {
        let la = a.0.leading().map(|(m, _)| m.clone());
        let lb = b.0.leading().map(|(m, _)| m.clone());
        la.cmp(&lb)
    });
    let xs = Monomial::all_up_to(dim, bounds.xdeg);
    let mut span: EchelonSpan<Monomial> = EchelonSpan::new(false);
    let mut kept = Vec::new();
    for (v, s) in order {
        if span.contains(v.terms()) {
            continue;
        }
        for d in power_derivatives(f, &s, derivs).values() {
            let base = lift(d);
            for beta in &xs {
                span.insert(base.mul_monomial(beta).into_terms());
            }
        }
        kept.push(s);
    }
    kept
}

/// `gamma f^{-1-alpha}` for each operator whose coefficients stay within the x-degree bound;
/// higher ones only arise at the edge of the truncation.
fn sections(ops: &[WeylOperator], inp: &AnnihilatorInput, bounds: &Bounds) -> Vec<PowerSection> {
    let base = PowerSection::new(Polynomial::one(inp.dim()), -&inp.alpha - int(1));
    ops.iter()
        .filter(|g| g.x_degree().unwrap_or(0) <= bounds.xdeg)
        .map(|g| apply_to_power(g, &inp.f, &base))
        .collect()
}

fn presentation_of(secs: &[PowerSection], inp: &AnnihilatorInput, budget: Option<u32>) -> HodgePresentation {
    let mut p = HodgePresentation::new(inp.alpha.clone());
    let floor = -inp.alpha.clone();
    for s in secs {
        let s = if s.exponent > floor {
            PowerSection::new(s.numerator_at(&inp.f, &floor).unwrap(), floor.clone())
        } else {
            s.clone()
        };
        let step = crate::exactalg::floor_i64(&(&floor - &s.exponent)) as u32;
        match budget {
            Some(b) => p.push(b as i64, s.numerator, step),
            None => p.push_unbounded(s.numerator, step),
        }
    }
    p
}

fn check_level(inp: &AnnihilatorInput, l: u32) -> Result<(), PpdError> {
    let m = inp.top_multiplicity();
    if l >= m {
        return Err(PpdError::LevelTooHigh { l, multiplicity: m });
    }
    Ok(())
}

/// First entries `P_0` of the bounded syzygies of `((E+alpha+1)^l, zeta_1..zeta_m, f)`.
pub fn weight_module_generators(inp: &AnnihilatorInput, l: u32, bounds: &Bounds) -> Result<Vec<WeylOperator>, PpdError> {
    inp.validate()?;
    check_level(inp, l)?;
    let mut targets = alloc::vec![inp.shifted_euler().pow(l)];
    targets.extend(inp.zetas.iter().cloned());
    targets.push(WeylOperator::from_polynomial(&inp.f));
    let ker = syzygy_kernel(&targets, bounds.order, bounds.xdeg);
    let firsts: Vec<WeylOperator> = ker.tuples.into_iter().map(|t| t[0].clone()).filter(|p| !p.is_zero()).collect();
    if firsts.is_empty() {
        return Err(PpdError::Inconclusive(String::from("no syzygy with a nonzero first entry")));
    }
    Ok(firsts)
}

/// `W_{n+l} = D . p_1(K_l) f^{-1-alpha}` as a presentation over all of `D`.
pub fn weight_module_presentation(inp: &AnnihilatorInput, l: u32, bounds: &Bounds) -> Result<PpdOutcome, PpdError> {
    let ops = weight_module_generators(inp, l, bounds)?;
    let kept = prune_sections(sections(&ops, inp, bounds), &inp.f, bounds, bounds.order);
    Ok(PpdOutcome {
        presentation: presentation_of(&kept, inp, None),
        operators: ops,
        conditional: false,
        epsilon: epsilon(inp.b.roots(), &inp.alpha),
        bounds: *bounds,
    })
}

/// `F_k W_{n+l} = phi_{-alpha}(W_l Gamma ∩ F_k) f^{-1-alpha}`, found as the `s`-free
/// operators of order `<= k` in `Gamma` whose product with `(E+alpha+1)^l` lies in `W_0 Gamma`.
/// The answer is an `O`-module presentation of the sections found.
pub fn hodge_on_weight(inp: &AnnihilatorInput, l: u32, k: u32, bounds: &Bounds) -> Result<PpdOutcome, PpdError> {
    inp.validate()?;
    if k >= 1 && !inp.pp_asserted {
        return Err(PpdError::PrimalityNotAsserted);
    }
    let dim = inp.dim();
    let gamma = left_multiples(&reduced_generators(inp, None), dim, bounds);
    let low = intersect_order(gamma, k, dim);
    let w0 = left_multiples(&reduced_generators(inp, Some(0)), dim, bounds);
    let ops = kernel_of_shift(&low, &inp.shifted_euler().pow(l), &w0, dim);
    let kept = prune_sections(sections(&ops, inp, bounds), &inp.f, bounds, 0);
    if kept.is_empty() {
        return Err(PpdError::Inconclusive(String::from("no element of the weighted ideal found")));
    }
    Ok(PpdOutcome {
        presentation: presentation_of(&kept, inp, Some(0)),
        operators: ops,
        conditional: k >= 1,
        epsilon: epsilon(inp.b.roots(), &inp.alpha),
        bounds: *bounds,
    })
}

/// For `alpha = 0` and roots in `(-2, -1]`: `F_k W_{n+l} = ((p_1(K_l) + D(E+1)) ∩ F_k) f^{-1}`,
/// and `F_k O(*f) = F_k D f^{-1}` when `level` is `None`.
pub fn hodge_rho21(inp: &AnnihilatorInput, level: Option<u32>, k: u32, bounds: &Bounds) -> Result<PpdOutcome, PpdError> {
    let window = Interval::open_closed(int(-2), int(-1));
    if !inp.alpha.is_zero() || !roots_in_interval(inp.b.roots(), &window) {
        return Err(PpdError::IntervalHypothesis);
    }
    inp.validate()?;
    if !inp.pp_asserted {
        return Err(PpdError::PrimalityNotAsserted);
    }
    let dim = inp.dim();
    let eps = epsilon(inp.b.roots(), &inp.alpha);
    let Some(l) = level else {
        let mut p = HodgePresentation::new(Rational::zero());
        p.push(k as i64, Polynomial::one(dim), 1);
        return Ok(PpdOutcome { presentation: p, operators: Vec::new(), conditional: true, epsilon: eps, bounds: *bounds });
    };
    let mut gens = weight_module_generators(inp, l, bounds)?;
    gens.push(inp.shifted_euler());
    let low = intersect_order(left_multiples(&gens, dim, bounds), k, dim);
    let kept = prune_sections(sections(&low, inp, bounds), &inp.f, bounds, 0);
    if kept.is_empty() {
        return Err(PpdError::Inconclusive(String::from("empty intersection")));
    }
    Ok(PpdOutcome {
        presentation: presentation_of(&kept, inp, Some(0)),
        operators: low,
        conditional: true,
        epsilon: eps,
        bounds: *bounds,
    })
}
