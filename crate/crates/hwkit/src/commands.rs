//! One typed request per verb. Requests are validated when built, echo their inputs
//! in normalized form, and run to a [`ResultEnvelope`].

use hwkit_core::bsdata::{
    classify_pair, genlevel_bound, reduce, weight_bounds, weighted_minimal_exponent, BFunction, ReducedBFunction,
};
use hwkit_core::exactalg::{int, Polynomial, Rational};
use hwkit_core::ppd::{hodge_on_weight, hodge_rho21, weight_module_presentation, AnnihilatorInput, PpdError, PpdOutcome};
use hwkit_core::snc::{snc_adjoint_specialization, snc_f0_ideal, snc_multiplier_ideal, snc_weight_top, SncDivisor};
use hwkit_core::vforacle::{
    main_formula_crosscheck, verify_bfunction, verify_v_axioms, BfunctionCertificate, Bounds, CrosscheckSource,
    DropGenerator, OracleError, SncFamily, VFamily, Verdict, WhomFamily,
};
use hwkit_core::whom::{whom_hodge_weight, whom_micromult_ideal, whom_weight_top, QuasiHomogeneousGerm};
use serde_json::{json, Value};

use crate::envelope::{self as env, ResultEnvelope};
use crate::error::{Failure, Status};
use crate::input::{route_alpha, Germ};
use crate::suite::{self, Profile};

/// The doubling schedule stops once any bound would pass these.
pub const CEILING: Bounds = Bounds { order: 16, xdeg: 48, dt_order: 24 };

/// Text telling the user what to try after an inconclusive run.
pub fn doubling_hint(b: &Bounds) -> String {
    let next = b.doubled();
    if next.order > CEILING.order || next.xdeg > CEILING.xdeg || next.dt_order > CEILING.dt_order {
        format!(
            "inconclusive at order {} / xdeg {} / dt-order {}; the doubling schedule has reached its ceiling",
            b.order, b.xdeg, b.dt_order
        )
    } else {
        format!(
            "inconclusive at order {} / xdeg {} / dt-order {}; next in the doubling schedule: --order {} --xdeg {} --dt-order {}",
            b.order, b.xdeg, b.dt_order, next.order, next.xdeg, next.dt_order
        )
    }
}

#[derive(Clone, Debug)]
pub struct SncRequest {
    pub divisor: SncDivisor,
    pub alpha: Rational,
    pub lmax: Option<u32>,
    pub kmax: u32,
    /// Zero-based components kept when a stratum is selected.
    pub stratum: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct WhomRequest {
    pub germ: QuasiHomogeneousGerm,
    pub alpha: Rational,
    pub k: u32,
    pub l: u32,
}

#[derive(Clone, Debug)]
pub struct BfunRequest {
    pub germ: Germ,
    /// `(order, xdeg)` for certifying the closed form.
    pub certify: Option<(u32, u32)>,
}

#[derive(Clone, Debug)]
pub struct VerifyBfunRequest {
    pub f: Polynomial,
    pub b: BFunction,
    pub order: u32,
    pub xdeg: u32,
}

#[derive(Clone, Debug)]
pub struct AxiomsRequest {
    pub germ: Germ,
    pub grid: Vec<Rational>,
    pub layers: u32,
    pub bounds: Bounds,
    /// Negative control: drop this generator from every strict list.
    pub drop: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ClassifyRequest {
    pub germ: Germ,
    pub alpha: Rational,
}

#[derive(Clone, Debug)]
pub struct BoundsRequest {
    pub germ: Germ,
    pub alpha: Rational,
    pub l: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct CrosscheckRequest {
    pub germ: Germ,
    pub alpha: Rational,
    pub k: u32,
    pub l: u32,
    pub bounds: Bounds,
}

#[derive(Clone, Debug)]
pub struct PpdRequest {
    pub input: AnnihilatorInput,
    pub l: Option<u32>,
    pub k: Option<u32>,
    pub rho21: bool,
    pub bounds: Bounds,
}

#[derive(Clone, Debug)]
pub enum Request {
    Snc(SncRequest),
    Whom(WhomRequest),
    Bfun(BfunRequest),
    VerifyBfun(VerifyBfunRequest),
    VerifyAxioms(AxiomsRequest),
    Classify(ClassifyRequest),
    Bounds(BoundsRequest),
    Crosscheck(CrosscheckRequest),
    Ppd(PpdRequest),
    Suite(Profile),
}

fn germ_echo(g: &Germ) -> Value {
    match g {
        Germ::Snc(d) => json!({ "kind": g.kind(), "exponents": d.exponents() }),
        Germ::Whom(w) => json!({
            "kind": g.kind(),
            "poly": env::poly(w.f()),
            "weights": w.weights().weights().iter().map(env::rational).collect::<Vec<_>>(),
        }),
        Germ::Roots { b, dim } => json!({ "kind": g.kind(), "b": b.roots().to_string(), "dim": dim }),
    }
}

fn annihilator_echo(inp: &AnnihilatorInput) -> Value {
    json!({
        "f": env::poly(&inp.f),
        "E": env::operator(&inp.euler),
        "zetas": inp.zetas.iter().map(env::operator).collect::<Vec<_>>(),
        "alpha": env::rational(&inp.alpha),
        "b": inp.b.roots().to_string(),
        "pp": inp.pp_asserted,
    })
}

impl Request {
    pub fn verb(&self) -> &'static str {
        match self {
            Request::Snc(_) => "snc",
            Request::Whom(_) => "whom",
            Request::Bfun(_) => "bfun",
            Request::VerifyBfun(_) => "verify bfun",
            Request::VerifyAxioms(_) => "verify axioms",
            Request::Classify(_) => "classify",
            Request::Bounds(_) => "bounds",
            Request::Crosscheck(_) => "crosscheck",
            Request::Ppd(_) => "ppd",
            Request::Suite(_) => "suite",
        }
    }

    pub fn bounds(&self) -> Option<Bounds> {
        match self {
            Request::VerifyBfun(r) => Some(Bounds::new(r.order, r.xdeg, 0)),
            Request::Bfun(BfunRequest { certify: Some((o, x)), .. }) => Some(Bounds::new(*o, *x, 0)),
            Request::VerifyAxioms(r) => Some(r.bounds),
            Request::Crosscheck(r) => Some(r.bounds),
            Request::Ppd(r) => Some(r.bounds),
            _ => None,
        }
    }

    /// Normalized inputs; equal echoes mean equal results.
    pub fn echo(&self) -> Value {
        match self {
            Request::Snc(r) => json!({
                "exponents": r.divisor.exponents(),
                "alpha": env::rational(&r.alpha),
                "lmax": r.lmax,
                "kmax": r.kmax,
                "stratum": r.stratum.as_ref().map(|s| s.iter().map(|i| i + 1).collect::<Vec<_>>()),
            }),
            Request::Whom(r) => json!({
                "germ": germ_echo(&Germ::Whom(r.germ.clone())),
                "alpha": env::rational(&r.alpha),
                "k": r.k,
                "l": r.l,
            }),
            Request::Bfun(r) => json!({ "germ": germ_echo(&r.germ), "certify": r.certify.is_some() }),
            Request::VerifyBfun(r) => json!({ "poly": env::poly(&r.f), "b": r.b.roots().to_string() }),
            Request::VerifyAxioms(r) => json!({
                "germ": germ_echo(&r.germ),
                "grid": r.grid.iter().map(env::rational).collect::<Vec<_>>(),
                "layers": r.layers,
                "drop": r.drop,
            }),
            Request::Classify(r) => json!({ "germ": germ_echo(&r.germ), "alpha": env::rational(&r.alpha) }),
            Request::Bounds(r) => json!({ "germ": germ_echo(&r.germ), "alpha": env::rational(&r.alpha), "l": r.l }),
            Request::Crosscheck(r) => json!({
                "germ": germ_echo(&r.germ),
                "alpha": env::rational(&r.alpha),
                "k": r.k,
                "l": r.l,
            }),
            Request::Ppd(r) => json!({
                "input": annihilator_echo(&r.input),
                "l": r.l,
                "k": r.k,
                "rho21": r.rho21,
            }),
            Request::Suite(p) => json!({ "profile": p.as_str() }),
        }
    }

    /// Suite runs are batteries of their own and never cached.
    pub fn cacheable(&self) -> bool {
        !matches!(self, Request::Suite(_))
    }

    pub fn run(&self) -> Result<ResultEnvelope, Failure> {
        let mut e = ResultEnvelope::new(self.verb(), self.echo());
        if let Some(b) = self.bounds() {
            e = e.with_bounds(b);
        }
        let outcome = match self {
            Request::Snc(r) => snc(r, &mut e),
            Request::Whom(r) => whom(r, &mut e),
            Request::Bfun(r) => bfun(r, &mut e),
            Request::VerifyBfun(r) => verify_bfun(r, &mut e),
            Request::VerifyAxioms(r) => verify_axioms(r, &mut e),
            Request::Classify(r) => classify(r, &mut e),
            Request::Bounds(r) => bounds(r, &mut e),
            Request::Crosscheck(r) => crosscheck(r, &mut e),
            Request::Ppd(r) => ppd(r, &mut e),
            Request::Suite(p) => {
                suite::run_into(*p, &mut e);
                Ok(())
            }
        };
        match outcome {
            Ok(()) => Ok(e),
            Err(Failure::Hypothesis(m)) => {
                e.degrade(Status::HypothesisFailed);
                e.outputs = Value::Null;
                e.note(m);
                Ok(e)
            }
            Err(other) => Err(other),
        }
    }
}

fn snc(r: &SncRequest, e: &mut ResultEnvelope) -> Result<(), Failure> {
    let (alpha, note) = route_alpha(&r.alpha)?;
    e.messages.extend(note);
    let d = match &r.stratum {
        Some(keep) => r.divisor.restrict(keep).map_err(Failure::hypothesis)?,
        None => r.divisor.clone(),
    };
    let top = snc_weight_top(&d, &alpha).map_err(Failure::hypothesis)?;
    let lmax = r.lmax.unwrap_or(top);
    if lmax > top {
        return Err(Failure::Hypothesis(format!("l = {lmax} exceeds the top weight level m_alpha = {top}")));
    }
    let mut rows = Vec::new();
    for l in 0..=lmax {
        let ideal = snc_f0_ideal(&d, &alpha, l).map_err(Failure::hypothesis)?;
        for k in 0..=r.kmax {
            rows.push(json!({ "k": k, "l": l, "generators": env::ideal(&ideal) }));
        }
    }
    let adjoint = if top >= 1 {
        env::ideal(&snc_adjoint_specialization(&d, &alpha).map_err(Failure::hypothesis)?)
    } else {
        Value::Null
    };
    e.outputs = json!({
        "f": env::poly(&d.f()),
        "alpha": env::rational(&alpha),
        "m_alpha": top,
        "multiplier_ideal": env::ideal(&snc_multiplier_ideal(&d, &alpha).map_err(Failure::hypothesis)?),
        "adjoint_ideal": adjoint,
        "rows": rows,
    });
    e.tag("closed-form");
    Ok(())
}

fn whom_alpha(alpha: &Rational) -> Result<(Rational, Option<String>), Failure> {
    let (alpha, note) = route_alpha(alpha)?;
    if alpha > int(1) {
        return Err(Failure::Hypothesis(format!(
            "alpha = {alpha}: the quasi-homogeneous formulas need 0 < alpha <= 1"
        )));
    }
    Ok((alpha, note))
}

fn whom(r: &WhomRequest, e: &mut ResultEnvelope) -> Result<(), Failure> {
    let (alpha, note) = whom_alpha(&r.alpha)?;
    e.messages.extend(note);
    let top = whom_weight_top(&alpha).map_err(Failure::hypothesis)?;
    if r.l > top {
        return Err(Failure::Hypothesis(format!("l = {} exceeds the top weight level {top}", r.l)));
    }
    let p = whom_hodge_weight(&r.germ, &alpha, r.k, r.l).map_err(Failure::hypothesis)?;
    let micro = whom_micromult_ideal(&r.germ, &alpha, r.k).map_err(Failure::hypothesis)?;
    let b = r.germ.bfunction().map_err(Failure::hypothesis)?;
    e.outputs = json!({
        "f": env::poly(r.germ.f()),
        "alpha": env::rational(&alpha),
        "milnor_basis": r.germ.milnor_basis().iter().map(|m| env::poly(&Polynomial::monomial(m.clone()))).collect::<Vec<_>>(),
        "milnor_number": r.germ.milnor_number(),
        "socle_degree": env::rational(r.germ.socle_degree()),
        "weight_top": top,
        "hodge_weight": env::presentation(&p),
        "micro_multiplier_ideal": micro.iter().map(env::poly).collect::<Vec<_>>(),
        "b_function": env::bfunction(&b),
    });
    e.tag("closed-form");
    Ok(())
}

/// Sets the status from a b-function certificate; returns whether it certifies minimality.
fn judge_bfunction(c: &BfunctionCertificate, bounds: &Bounds, e: &mut ResultEnvelope) -> bool {
    e.certificates.push(env::bfunction_certificate(c));
    if c.minimal_at_bound() {
        return true;
    }
    if !c.equation.is_member() {
        e.degrade(Status::Inconclusive);
        e.note(doubling_hint(bounds));
    } else {
        e.degrade(Status::Refuted);
        e.note("a maximal proper divisor also satisfies the functional equation, so the candidate is not minimal");
    }
    false
}

fn oracle_failure(err: OracleError) -> Failure {
    Failure::hypothesis(err)
}

fn reduced(b: &BFunction) -> Result<ReducedBFunction, Failure> {
    reduce(b.roots()).map_err(Failure::hypothesis)
}

fn bfun(r: &BfunRequest, e: &mut ResultEnvelope) -> Result<(), Failure> {
    let mut b = r.germ.bfunction()?;
    if let Some((order, xdeg)) = r.certify {
        let f = r.germ.f().ok_or_else(|| Failure::Usage("certification needs the polynomial, not only roots".into()))?;
        let c = verify_bfunction(&f, b.roots(), order, xdeg).map_err(oracle_failure)?;
        if judge_bfunction(&c, &Bounds::new(order, xdeg, 0), e) {
            b = b.mark_verified();
        }
    }
    let rb = reduced(&b)?;
    e.outputs = json!({
        "b_function": env::bfunction(&b),
        "text": b.to_string(),
        "reduced": rb.to_string(),
        "minimal_exponent": weighted_minimal_exponent(&rb, 0).as_ref().map(env::rational),
    });
    e.tag(b.provenance().as_str());
    e.tag(if b.is_verified() { "verified" } else { "unverified" });
    Ok(())
}

fn verify_bfun(r: &VerifyBfunRequest, e: &mut ResultEnvelope) -> Result<(), Failure> {
    let c = verify_bfunction(&r.f, r.b.roots(), r.order, r.xdeg).map_err(oracle_failure)?;
    let ok = judge_bfunction(&c, &Bounds::new(r.order, r.xdeg, 0), e);
    let b = if ok { r.b.clone().mark_verified() } else { r.b.clone() };
    e.outputs = json!({
        "b_function": env::bfunction(&b),
        "equation": c.equation.verdict.as_str(),
        "minimal_at_bound": ok,
    });
    e.tag(if ok { "verified" } else { "unverified" });
    Ok(())
}

fn verify_axioms(r: &AxiomsRequest, e: &mut ResultEnvelope) -> Result<(), Failure> {
    let family: Box<dyn VFamily> = match (&r.germ, r.drop) {
        (Germ::Snc(d), None) => Box::new(SncFamily::new(d.clone())),
        (Germ::Snc(d), Some(index)) => Box::new(DropGenerator { inner: SncFamily::new(d.clone()), index }),
        (Germ::Whom(g), None) => Box::new(WhomFamily::new(g.clone())),
        (Germ::Whom(g), Some(index)) => Box::new(DropGenerator { inner: WhomFamily::new(g.clone()), index }),
        (Germ::Roots { .. }, _) => {
            return Err(Failure::Usage("axiom checks need --exponents or --poly with --weights".into()))
        }
    };
    if r.grid.iter().any(|g| *g <= int(0)) {
        return Err(Failure::Hypothesis("the axiom grid must consist of positive rationals".into()));
    }
    let report = verify_v_axioms(family.as_ref(), &r.grid, r.layers, &r.bounds).map_err(oracle_failure)?;
    if !report.all_member() {
        let refuted = report.checks.iter().any(|c| c.certificate.verdict == Verdict::Refuted);
        e.degrade(if refuted { Status::Refuted } else { Status::Inconclusive });
        if !refuted {
            e.note(doubling_hint(&r.bounds));
        }
    }
    e.outputs = json!({ "all_member": report.all_member(), "checks": report.checks.len() });
    e.certificates.push(env::axiom_report(&report));
    e.tag("candidate");
    e.tag("bounded-certificate");
    Ok(())
}

fn classify(r: &ClassifyRequest, e: &mut ResultEnvelope) -> Result<(), Failure> {
    if r.alpha <= int(0) {
        return Err(Failure::Hypothesis(format!("classification needs alpha > 0, got {}", r.alpha)));
    }
    let b = r.germ.bfunction()?;
    let rb = reduced(&b)?;
    let class = classify_pair(&rb, &r.alpha).map_err(Failure::hypothesis)?;
    if r.alpha > int(1) {
        e.note("alpha > 1: the pair is neither lc, plt nor klt");
    }
    e.outputs = json!({
        "lc": class.lc,
        "plt": class.plt,
        "klt": class.klt,
        "reduced_b_function": rb.to_string(),
        "minimal_exponent": weighted_minimal_exponent(&rb, 0).as_ref().map(env::rational),
    });
    e.tag(b.provenance().as_str());
    Ok(())
}

fn bounds(r: &BoundsRequest, e: &mut ResultEnvelope) -> Result<(), Failure> {
    let (alpha, note) = route_alpha(&r.alpha)?;
    e.messages.extend(note);
    let n = r.germ.dim().ok_or_else(|| Failure::Usage("the dimension is unknown; pass --dim".into()))? as u32;
    let b = r.germ.bfunction()?;
    let rb = reduced(&b)?;
    let (lo, hi) = weight_bounds(&rb, &alpha, n).map_err(Failure::hypothesis)?;
    let genlevel = match genlevel_bound(&rb, &alpha, n, 0, false) {
        Ok(v) => Some(v),
        Err(err) => {
            e.note(format!("no generating-level bound: {err}"));
            None
        }
    };
    let graded = match r.l {
        Some(l) => Some(genlevel_bound(&rb, &alpha, n, l, true).map_err(Failure::hypothesis)?),
        None => None,
    };
    e.outputs = json!({
        "alpha": env::rational(&alpha),
        "weight_bounds": [lo, hi],
        "genlevel": genlevel,
        "graded_genlevel": graded,
    });
    e.tag(b.provenance().as_str());
    Ok(())
}

fn crosscheck(r: &CrosscheckRequest, e: &mut ResultEnvelope) -> Result<(), Failure> {
    let (alpha, note) = route_alpha(&r.alpha)?;
    e.messages.extend(note);
    let source = match &r.germ {
        Germ::Snc(d) => CrosscheckSource::Snc(d.clone()),
        Germ::Whom(g) => CrosscheckSource::Whom(g.clone()),
        Germ::Roots { .. } => {
            return Err(Failure::Usage("crosscheck needs --exponents or --poly with --weights".into()))
        }
    };
    let report = main_formula_crosscheck(&source, &alpha, r.k, r.l, &r.bounds).map_err(oracle_failure)?;
    match report.verdict() {
        Verdict::Member => {}
        Verdict::Refuted => e.degrade(Status::Refuted),
        Verdict::NotFoundAtBound => {
            e.degrade(Status::Inconclusive);
            e.note(doubling_hint(&r.bounds));
        }
    }
    e.outputs = json!({
        "verdict": report.verdict().as_str(),
        "closed_form": env::presentation(&report.closed_form),
    });
    e.certificates.push(env::crosscheck(&report));
    e.tag("closed-form");
    e.tag("bounded-certificate");
    Ok(())
}

fn ppd_failure(err: PpdError, bounds: &Bounds, e: &mut ResultEnvelope) -> Result<(), Failure> {
    match err {
        PpdError::Inconclusive(m) => {
            e.degrade(Status::Inconclusive);
            e.note(m);
            e.note(doubling_hint(bounds));
            Ok(())
        }
        other => Err(Failure::hypothesis(other)),
    }
}

fn ppd(r: &PpdRequest, e: &mut ResultEnvelope) -> Result<(), Failure> {
    let result: Result<(PpdOutcome, &str), PpdError> = if r.rho21 {
        hodge_rho21(&r.input, r.l, r.k.unwrap_or(0), &r.bounds).map(|o| (o, "hodge-on-weight"))
    } else {
        let l = r.l.ok_or_else(|| Failure::Usage("--l is required unless --rho21 is given".into()))?;
        match r.k {
            Some(k) => hodge_on_weight(&r.input, l, k, &r.bounds).map(|o| (o, "hodge-on-weight")),
            None => weight_module_presentation(&r.input, l, &r.bounds).map(|o| (o, "weight-module")),
        }
    };
    let (outcome, what) = match result {
        Ok(v) => v,
        Err(err) => return ppd_failure(err, &r.bounds, e),
    };
    e.outputs = json!({
        "piece": what,
        "presentation": env::presentation(&outcome.presentation),
        "operators": outcome.operators.iter().map(env::operator).collect::<Vec<_>>(),
        "epsilon": env::rational(&outcome.epsilon),
        "conditional": outcome.conditional,
    });
    e.tag("bounded-computation");
    e.tag(if outcome.conditional { "conditional" } else { "unconditional" });
    Ok(())
}
