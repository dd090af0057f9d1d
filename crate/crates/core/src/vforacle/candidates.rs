use alloc::vec::Vec;

use num_traits::Zero;

use crate::exactalg::{ceil_i64, int, Polynomial, Rational};
use crate::snc::SncDivisor;
use crate::whom::QuasiHomogeneousGerm;

use super::element::{act, s_shift_power, BfAction, BfElement};
use super::span::{bf_membership_many, BfGenerator};
use super::{Bounds, OracleError, SpanCertificate};

/// A candidate `V`-filtration on `O[dt]`, given by generators of `V^lambda` (or `V^{>lambda}`)
/// over `D_X`, restricted to dt-layers `<= jmax`.
pub trait VFamily {
    fn f(&self) -> Polynomial;

    fn generators(&self, lambda: &Rational, strict: bool, jmax: u32) -> Vec<BfGenerator>;

    /// Claimed `N` with `(s + lambda)^N V^lambda ⊆ V^{>lambda}`.
    fn nilpotency(&self, lambda: &Rational) -> u32;
}

/// `V^lambda = sum_j D_X f^{(lambda+j)} dt^j` with `f^{(lambda)} = prod x_i^{ceil(lambda a_i)-1}`.
#[derive(Clone, Debug)]
pub struct SncFamily {
    pub divisor: SncDivisor,
}

impl SncFamily {
    pub fn new(divisor: SncDivisor) -> Self {
        SncFamily { divisor }
    }
}

/// Generators `f^{(lambda+j)} dt^j`, `j <= jmax`.
pub fn candidate_v_snc(divisor: &SncDivisor, lambda: &Rational, jmax: u32) -> Vec<BfElement> {
    (0..=jmax)
        .map(|j| BfElement::layer(Polynomial::monomial(divisor.f_lambda(&(lambda + int(j as i64)))), j))
        .collect()
}

impl VFamily for SncFamily {
    fn f(&self) -> Polynomial {
        self.divisor.f()
    }

    fn generators(&self, lambda: &Rational, strict: bool, jmax: u32) -> Vec<BfGenerator> {
        (0..=jmax)
            .map(|j| {
                let mu = lambda + int(j as i64);
                let m = if strict { self.divisor.f_lambda_plus(&mu) } else { self.divisor.f_lambda(&mu) };
                BfGenerator::new(BfElement::layer(Polynomial::monomial(m), j), None)
            })
            .collect()
    }

    fn nilpotency(&self, lambda: &Rational) -> u32 {
        self.divisor.m_alpha(lambda)
    }
}

/// For `0 < lambda <= 1`: `F_k V^lambda = sum_j F_{k-j} D_X O^{>=lambda+j-|w|} dt^j`;
/// larger `lambda` through `V^{lambda+1} = t V^lambda`.
#[derive(Clone, Debug)]
pub struct WhomFamily {
    pub germ: QuasiHomogeneousGerm,
}

impl WhomFamily {
    pub fn new(germ: QuasiHomogeneousGerm) -> Self {
        WhomFamily { germ }
    }

    fn base(&self, mu: &Rational, strict: bool, jmax: u32, k: Option<u32>) -> Vec<BfGenerator> {
        let total = self.germ.weights().total();
        let mut out = Vec::new();
        for j in 0..=jmax {
            let budget = match k {
                Some(k) if j > k => break,
                Some(k) => Some(k - j),
                None => None,
            };
            let gamma = mu + int(j as i64) - &total;
            for g in self.germ.graded(&gamma, strict).generator_polys() {
                out.push(BfGenerator::new(BfElement::layer(g, j), budget));
            }
        }
        out
    }

    /// `V^lambda = t^m V^mu` with `mu` in `(0, 1]` (strict: `[0, 1)`).
    fn split(lambda: &Rational, strict: bool) -> (u32, Rational) {
        let m = if strict { crate::exactalg::floor_i64(lambda) } else { ceil_i64(lambda) - 1 };
        let m = m.max(0);
        (m as u32, lambda - int(m))
    }

    fn with_t(&self, gens: Vec<BfGenerator>, m: u32) -> Vec<BfGenerator> {
        let f = self.germ.f();
        gens.into_iter()
            .map(|mut g| {
                for _ in 0..m {
                    g.element = act(BfAction::T, &g.element, f).expect("t never fails");
                }
                g
            })
            .filter(|g| !g.element.is_zero())
            .collect()
    }
}

/// Generators of `F_k V^lambda` for `0 < lambda <= 1`: graded monomials times `dt^j` with budget `k-j`.
pub fn candidate_v_whom(germ: &QuasiHomogeneousGerm, lambda: &Rational, k: u32) -> Vec<BfGenerator> {
    WhomFamily::new(germ.clone()).base(lambda, false, k, Some(k))
}

impl VFamily for WhomFamily {
    fn f(&self) -> Polynomial {
        self.germ.f().clone()
    }

    fn generators(&self, lambda: &Rational, strict: bool, jmax: u32) -> Vec<BfGenerator> {
        let (m, mu) = Self::split(lambda, strict);
        let base = self.base(&mu, strict, jmax + m, None);
        self.with_t(base, m)
            .into_iter()
            .filter(|g| g.element.t_order().unwrap_or(0) <= jmax)
            .collect()
    }

    fn nilpotency(&self, lambda: &Rational) -> u32 {
        let (_, mu) = Self::split(lambda, false);
        if mu == int(1) {
            2
        } else {
            1
        }
    }
}

/// A negative control: the wrapped family with one generator removed from every `V^{>lambda}` list.
#[derive(Clone, Debug)]
pub struct DropGenerator<F> {
    pub inner: F,
    pub index: usize,
}

impl<F: VFamily> VFamily for DropGenerator<F> {
    fn f(&self) -> Polynomial {
        self.inner.f()
    }

    fn generators(&self, lambda: &Rational, strict: bool, jmax: u32) -> Vec<BfGenerator> {
        let mut g = self.inner.generators(lambda, strict, jmax);
        if strict && self.index < g.len() {
            g.remove(self.index);
        }
        g
    }

    fn nilpotency(&self, lambda: &Rational) -> u32 {
        self.inner.nilpotency(lambda)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomKind {
    /// `t V^gamma ⊆ V^{gamma+1}`.
    TShift,
    /// `dt V^gamma ⊆ V^{gamma-1}`.
    DtShift,
    /// `(s + gamma)^N V^gamma ⊆ V^{>gamma}`.
    Nilpotent,
}

impl AxiomKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AxiomKind::TShift => "t-shift",
            AxiomKind::DtShift => "dt-shift",
            AxiomKind::Nilpotent => "nilpotent",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub kind: AxiomKind,
    pub gamma: Rational,
    pub certificate: SpanCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_member(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.certificate.is_member())
    }
}

fn max_t_order(elements: &[BfElement]) -> u32 {
    elements.iter().filter_map(BfElement::t_order).max().unwrap_or(0)
}

fn contained(
    family: &dyn VFamily,
    elements: Vec<BfElement>,
    lambda: &Rational,
    strict: bool,
    bounds: &Bounds,
) -> Result<SpanCertificate, OracleError> {
    let elements: Vec<BfElement> = elements.into_iter().filter(|e| !e.is_zero()).collect();
    let f = family.f();
    // Generators on layers above every tested element cannot contribute.
    let container = family.generators(lambda, strict, max_t_order(&elements));
    bf_membership_many(&elements, &container, &f, bounds)
}

/// Checks the three axioms generator-wise for each `gamma` of the grid, testing the
/// generators on dt-layers `<= test_layers`.
pub fn verify_v_axioms(
    family: &dyn VFamily,
    grid: &[Rational],
    test_layers: u32,
    bounds: &Bounds,
) -> Result<AxiomReport, OracleError> {
    let f = family.f();
    let mut checks = Vec::new();
    for gamma in grid {
        let gens: Vec<BfElement> = family.generators(gamma, false, test_layers).into_iter().map(|g| g.element).collect();
        let t_images = gens.iter().map(|g| act(BfAction::T, g, &f)).collect::<Result<Vec<_>, _>>()?;
        checks.push(AxiomCheck {
            kind: AxiomKind::TShift,
            gamma: gamma.clone(),
            certificate: contained(family, t_images, &(gamma + int(1)), false, bounds)?,
        });
        let lower = gamma - int(1);
        if lower > Rational::zero() {
            let dt_images = gens.iter().map(|g| act(BfAction::Dt, g, &f)).collect::<Result<Vec<_>, _>>()?;
            checks.push(AxiomCheck {
                kind: AxiomKind::DtShift,
                gamma: gamma.clone(),
                certificate: contained(family, dt_images, &lower, false, bounds)?,
            });
        }
        let n = family.nilpotency(gamma);
        let nil = gens.iter().map(|g| s_shift_power(g, &f, gamma, n)).collect();
        checks.push(AxiomCheck {
            kind: AxiomKind::Nilpotent,
            gamma: gamma.clone(),
            certificate: contained(family, nil, gamma, true, bounds)?,
        });
    }
    Ok(AxiomReport { checks })
}

/// Certifies `(s + lambda)^l g ∈ span(V^{>lambda})` for every kernel candidate `g`.
pub fn kernel_filtration_check(
    f: &Polynomial,
    lambda: &Rational,
    l: u32,
    kernel: &[BfGenerator],
    strict: &[BfGenerator],
    bounds: &Bounds,
) -> Result<SpanCertificate, OracleError> {
    let images: Vec<BfElement> = kernel
        .iter()
        .map(|g| s_shift_power(&g.element, f, lambda, l))
        .filter(|e| !e.is_zero())
        .collect();
    let top = max_t_order(&images);
    let container: Vec<BfGenerator> =
        strict.iter().filter(|g| g.element.layers().keys().next().map_or(false, |&j| j <= top)).cloned().collect();
    bf_membership_many(&images, &container, f, bounds)
}
