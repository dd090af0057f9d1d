use super::*;
use crate::bsdata::Provenance;
use crate::exactalg::{poly_parse, rat};
use crate::snc::{snc_hodge_weight, SncDivisor};
use crate::vforacle::{presentations_equal, verify_bfunction, Verdict};
use crate::whom::{whom_hodge_weight, QuasiHomogeneousGerm};
use crate::exactalg::WeightVector;
use alloc::vec;

fn op(text: &str) -> WeylOperator {
    WeylOperator::parse(text, 2).unwrap()
}

fn p(text: &str) -> Polynomial {
    poly_parse(text, 2).unwrap()
}

fn bfun(text: &str) -> BFunction {
    BFunction::new(RootMultiset::parse_product(text).unwrap(), Provenance::UserSupplied).unwrap()
}

fn node(alpha: Rational) -> AnnihilatorInput {
    AnnihilatorInput {
        f: p("x1*x2"),
        euler: op("1/2*x1*d1 + 1/2*x2*d2"),
        zetas: vec![op("x1*d1 - x2*d2")],
        alpha,
        b: bfun("(s+1)^2"),
        pp_asserted: true,
    }
}

fn cusp() -> AnnihilatorInput {
    AnnihilatorInput {
        f: p("x1^2 + x2^3"),
        euler: op("1/2*x1*d1 + 1/3*x2*d2"),
        zetas: vec![op("3*x2^2*d1 - 2*x1*d2")],
        alpha: rat(0, 1),
        b: bfun("(s+1)(s+5/6)(s+7/6)"),
        pp_asserted: true,
    }
}

fn bounds() -> Bounds {
    Bounds::new(3, 6, 6)
}

fn generators(pres: &HodgePresentation) -> Vec<(String, u32)> {
    let mut v: Vec<(String, u32)> = pres.summands.iter().map(|s| (alloc::format!("{}", s.generator), s.pole_step)).collect();
    v.sort();
    v
}

fn snc_node(k: u32, l: u32) -> HodgePresentation {
    snc_hodge_weight(&SncDivisor::new(vec![1, 1]).unwrap(), &rat(1, 1), k, l).unwrap()
}

fn unbounded(p: &HodgePresentation) -> HodgePresentation {
    let mut out = HodgePresentation::new(p.twist.clone());
    for s in &p.summands {
        out.push_unbounded(s.generator.clone(), s.pole_step);
    }
    out
}

#[test]
fn annihilator_examples() {
    assert!(check_annihilator(&op("x1*d1 - x2*d2"), &p("x1*x2")));
    assert!(check_annihilator(&op("3*x2^2*d1 - 2*x1*d2"), &p("x1^2 + x2^3")));
    let x = poly_parse("x1", 1).unwrap();
    assert!(!check_annihilator(&WeylOperator::parse("d1", 1).unwrap(), &x));
    // E - s + 1 kills f^{s-1}.
    let e = op("1/2*x1*d1 + 1/2*x2*d2 - s + 1");
    assert!(check_annihilator(&e, &p("x1*x2")));
}

#[test]
fn euler_action() {
    assert_eq!(apply_to_polynomial(&op("1/2*x1*d1 + 1/3*x2*d2"), &p("x1^2 + x2^3")), p("x1^2 + x2^3"));
    assert_eq!(apply_to_polynomial(&op("d1^2"), &p("x1^3*x2")), p("6*x1*x2"));
}

#[test]
fn input_validation() {
    assert!(node(rat(0, 1)).validate().is_ok());
    assert!(cusp().validate().is_ok());
    let mut bad = node(rat(0, 1));
    bad.euler = op("2*x1*d1");
    bad.zetas.push(op("d1"));
    bad.zetas.push(op("s*d1"));
    let v = bad.violations();
    assert!(v.contains(&InputViolation::EulerDoesNotFixF));
    assert!(v.contains(&InputViolation::NotAnAnnihilator(1)));
    assert!(v.contains(&InputViolation::AnnihilatorInvolvesS(2)));
    let mut far = node(rat(1, 1));
    far.b = bfun("(s+1)^2");
    assert_eq!(far.violations(), vec![InputViolation::RootsOutsideWindow]);
    let mut neg = node(rat(-1, 2));
    neg.b = bfun("(s+1)^2");
    assert!(neg.violations().contains(&InputViolation::NegativeAlpha));
    let mut second = node(rat(0, 1));
    second.euler = op("x1*x2*d1*d2");
    assert!(second.violations().contains(&InputViolation::EulerNotFirstOrder));
}

#[test]
fn epsilon_choice() {
    assert_eq!(epsilon(node(rat(0, 1)).b.roots(), &rat(0, 1)), rat(1, 2));
    assert_eq!(epsilon(cusp().b.roots(), &rat(0, 1)), rat(1, 12));
}

#[test]
fn gamma_examples() {
    let g = gamma_ideal(&node(rat(0, 1)), None).unwrap();
    assert!(g.beta.is_empty());
    assert_eq!(g.generators, vec![op("x1*x2"), op("x1*d1 - x2*d2"), op("1/2*x1*d1 + 1/2*x2*d2 - s + 1")]);
    let g = gamma_ideal(&cusp(), None).unwrap();
    assert_eq!(g.beta, RootMultiset::parse_product("(s+1/6)").unwrap());
    assert_eq!(g.generators[1], op("-s + 1/6"));
    // At alpha + epsilon the root -1 enters the window with its multiplicity.
    let w0 = gamma_ideal(&node(rat(0, 1)), Some(0)).unwrap();
    assert_eq!(w0.generators[1], op("s^2"));
    assert_eq!(w0.epsilon, rat(1, 2));
}

#[test]
fn f_lies_in_first_projection() {
    let inp = node(rat(0, 1));
    for l in 0..2u32 {
        let shifted = inp.euler.add(&WeylOperator::constant(2, rat(1, 1))).pow(l);
        let tuple = [WeylOperator::from_polynomial(&inp.f), WeylOperator::zero(2), inp.euler.pow(l).scale(&rat(-1, 1))];
        let targets = [shifted, inp.zetas[0].clone(), WeylOperator::from_polynomial(&inp.f)];
        assert!(crate::weyl::recombine(&tuple, &targets).is_zero());
        let gens = weight_module_generators(&inp, l, &Bounds::new(2, 3, 6)).unwrap();
        let mut span: EchelonSpan<WeylMonomial> = EchelonSpan::new(false);
        for g in &gens {
            span.insert(g.terms().clone());
        }
        assert!(span.contains(WeylOperator::from_polynomial(&inp.f).terms()));
    }
}

#[test]
fn weight_module_node() {
    let inp = node(rat(0, 1));
    let b = Bounds::new(2, 4, 6);
    for l in 0..2u32 {
        let w = weight_module_presentation(&inp, l, &b).unwrap();
        let want = unbounded(&snc_node(0, l));
        let r = presentations_equal(&w.presentation, &want, &inp.f, &b).unwrap();
        assert!(r.both_member(), "l={l}: {}", w.presentation);
    }
    assert_eq!(
        weight_module_generators(&inp, 2, &b),
        Err(PpdError::LevelTooHigh { l: 2, multiplicity: 2 })
    );
}

#[test]
fn hodge_node_values() {
    let inp = node(rat(0, 1));
    let h = hodge_on_weight(&inp, 1, 0, &bounds()).unwrap();
    assert_eq!(generators(&h.presentation), vec![("x1".into(), 1), ("x2".into(), 1)]);
    assert!(!h.conditional);
    let h = hodge_on_weight(&inp, 0, 0, &bounds()).unwrap();
    assert!(h.operators.contains(&op("x1*x2")));
    // x1*x2 f^{-1} = 1.
    assert_eq!(generators(&h.presentation), vec![("1".into(), 0)]);
}

#[test]
fn hodge_node_matches_normal_crossing() {
    let inp = node(rat(0, 1));
    let b = bounds();
    for l in 0..2u32 {
        for k in 0..2u32 {
            let h = hodge_on_weight(&inp, l, k, &b).unwrap();
            let r = presentations_equal(&h.presentation, &snc_node(k, l), &inp.f, &b).unwrap();
            assert!(r.both_member(), "l={l} k={k}: {} vs {}", h.presentation, snc_node(k, l));
            assert_eq!(h.conditional, k >= 1);
        }
    }
}

#[test]
fn hodge_needs_primality_for_positive_k() {
    let mut inp = node(rat(0, 1));
    inp.pp_asserted = false;
    assert!(hodge_on_weight(&inp, 0, 0, &bounds()).is_ok());
    assert_eq!(hodge_on_weight(&inp, 0, 1, &bounds()), Err(PpdError::PrimalityNotAsserted));
}

#[test]
fn cusp_lowest_weight_is_structure_sheaf() {
    let inp = cusp();
    let b = bounds();
    let w = QuasiHomogeneousGerm::new(inp.f.clone(), WeightVector::new(vec![rat(1, 2), rat(1, 3)]).unwrap()).unwrap();
    let h = hodge_on_weight(&inp, 0, 0, &b).unwrap();
    let want = whom_hodge_weight(&w, &rat(1, 1), 0, 0).unwrap();
    let r = presentations_equal(&h.presentation, &want, &inp.f, &b).unwrap();
    assert!(r.both_member(), "{}", h.presentation);
    let wm = weight_module_presentation(&inp, 0, &Bounds::new(2, 4, 6)).unwrap();
    let r = presentations_equal(&wm.presentation, &unbounded(&want), &inp.f, &Bounds::new(2, 4, 6)).unwrap();
    assert!(r.both_member(), "{}", wm.presentation);
}

#[test]
fn weight_levels_increase() {
    let inp = node(rat(0, 1));
    let b = bounds();
    let h0 = hodge_on_weight(&inp, 0, 0, &b).unwrap();
    let h1 = hodge_on_weight(&inp, 1, 0, &b).unwrap();
    let r = presentations_equal(&h0.presentation, &h1.presentation, &inp.f, &b).unwrap();
    assert_eq!(r.forward.verdict, Verdict::Member);
    assert_ne!(r.backward.verdict, Verdict::Member);
}

#[test]
fn rho21_formulas() {
    let inp = node(rat(0, 1));
    let b = bounds();
    let full = hodge_rho21(&inp, None, 2, &b).unwrap();
    assert_eq!(full.presentation.summands.len(), 1);
    assert_eq!(full.presentation.summands[0].budget, Some(2));
    for (l, k) in [(1, 0), (0, 1)] {
        let h = hodge_rho21(&inp, Some(l), k, &b).unwrap();
        let r = presentations_equal(&h.presentation, &snc_node(k, l), &inp.f, &b).unwrap();
        assert!(r.both_member(), "l={l} k={k}: {}", h.presentation);
    }
    assert_eq!(hodge_rho21(&cusp(), None, 0, &b), Err(PpdError::IntervalHypothesis));
}

#[test]
fn node_bfunction_is_certified() {
    let c = verify_bfunction(&p("x1*x2"), node(rat(0, 1)).b.roots(), 2, 2).unwrap();
    assert!(c.minimal_at_bound());
}
