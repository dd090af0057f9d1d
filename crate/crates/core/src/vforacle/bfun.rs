use alloc::vec::Vec;

use crate::bsdata::RootMultiset;
use crate::exactalg::{Monomial, Polynomial, Rational};
use crate::weyl::{apply_to_twisted, twisted_derivatives, TwistedSection, WeylMonomial, WeylOperator};

use super::span::LabeledSpan;
use super::{Bounds, OracleError, SpanCertificate, Verdict};

/// Outcome of one maximal proper divisor at the same bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorCheck {
    pub removed_root: Rational,
    pub divisor: RootMultiset,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfunctionCertificate {
    /// `member` certifies `b(s) f^s = P f^{s+1}`; the single witness is `P`.
    pub equation: SpanCertificate,
    pub divisors: Vec<DivisorCheck>,
}

impl BfunctionCertificate {
    /// The equation holds and no maximal proper divisor satisfies it at these bounds.
    pub fn minimal_at_bound(&self) -> bool {
        self.equation.is_member() && self.divisors.iter().all(|d| d.verdict != Verdict::Member)
    }
}

fn s_polynomial(b: &RootMultiset, n1: usize) -> Polynomial {
    let s = n1 - 1;
    Polynomial::from_terms(
        n1,
        b.coefficients().into_iter().enumerate().map(|(j, c)| {
            let mut e = alloc::vec![0u32; n1];
            e[s] = j as u32;
            (Monomial(e), c)
        }),
    )
}

/// Solves `P(s) f^{s+1} = b(s) f^s` with `P = sum c x^beta d^gamma s^j`, `|gamma| <= order`,
/// `|beta| <= xdeg`, `j <= deg b`, then tries every maximal proper divisor on the same span.
pub fn verify_bfunction(f: &Polynomial, b: &RootMultiset, order: u32, xdeg: u32) -> Result<BfunctionCertificate, OracleError> {
    if b.is_empty() {
        return Err(OracleError::EmptyBFunction);
    }
    let dim = f.dim();
    let n1 = dim + 1;
    let bounds = Bounds { order, xdeg, dt_order: 0 };
    let fe = f.embed(n1);
    let derivs = twisted_derivatives(f, &TwistedSection::power(dim, 1), order);
    let xs = Monomial::all_up_to(dim, xdeg);
    let mut span: LabeledSpan<Monomial> = LabeledSpan::new();
    for (gamma, sec) in &derivs {
        let lifted = sec.lift_pole(f, order);
        for j in 0..=b.degree() {
            for beta in &xs {
                let mut e = beta.0.clone();
                e.push(j);
                let v = lifted.mul_monomial(&Monomial(e));
                span.push(0, WeylMonomial { x: beta.clone(), d: gamma.clone(), s: j }, v.into_terms());
            }
        }
    }
    // b(s) f^s over f^{s+1-order}.
    let target_of = |r: &RootMultiset| s_polynomial(r, n1).mul(&fe.pow(order - 1));
    let solve = |r: &RootMultiset| -> Result<Option<WeylOperator>, OracleError> {
        let target = target_of(r);
        match span.solve(&target.into_terms()) {
            None => Ok(None),
            Some(w) => {
                let p = w.into_iter().next().map(|t| t.operator).unwrap_or_else(|| WeylOperator::zero(dim));
                let back = apply_to_twisted(&p, f, &TwistedSection::power(dim, 1));
                let want = TwistedSection::new(s_polynomial(r, n1), 0, 0);
                if back.canonical(f) != want.canonical(f) {
                    return Err(OracleError::WitnessMismatch);
                }
                Ok(Some(p))
            }
        }
    };
    let equation = match solve(b)? {
        Some(p) => SpanCertificate::member(bounds, alloc::vec![alloc::vec![super::WitnessTerm { generator: 0, operator: p }]]),
        None => SpanCertificate::not_found(
            bounds,
            alloc::format!("no operator among {} spanning vectors", span.len()),
        ),
    };
    let mut divisors = Vec::new();
    for (root, d) in b.maximal_divisors() {
        let verdict = if solve(&d)?.is_some() { Verdict::Member } else { Verdict::NotFoundAtBound };
        divisors.push(DivisorCheck { removed_root: root, divisor: d, verdict });
    }
    Ok(BfunctionCertificate { equation, divisors })
}
