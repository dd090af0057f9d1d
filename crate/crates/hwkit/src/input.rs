//! Reading command-line values and annihilator files into core types.

use hwkit_core::bsdata::{bfunction_snc, BFunction, Provenance, RootMultiset};
use hwkit_core::exactalg::{int, parse_rational, Polynomial, Rational, WeightVector};
use hwkit_core::ppd::AnnihilatorInput;
use hwkit_core::snc::SncDivisor;
use hwkit_core::weyl::WeylOperator;
use hwkit_core::whom::QuasiHomogeneousGerm;
use serde::Deserialize;

use crate::error::Failure;

pub fn rational(text: &str) -> Result<Rational, Failure> {
    parse_rational(text).map_err(Failure::usage)
}

pub fn rational_list(text: &str) -> Result<Vec<Rational>, Failure> {
    text.split(',').map(|t| rational(t.trim())).collect()
}

pub fn u32_list(text: &str) -> Result<Vec<u32>, Failure> {
    text.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| Failure::Usage(format!("not a non-negative integer: {t:?}"))))
        .collect()
}

#[derive(Deserialize)]
struct RootEntry {
    root: String,
    mult: u32,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RootsJson {
    List(Vec<RootEntry>),
    Object { roots: Vec<RootEntry> },
}

/// A root product such as `(s+1)(s+5/6)`, or the JSON rendering `[{"root":"-1","mult":2}]`
/// (bare or wrapped in an object with a `roots` field).
pub fn root_multiset(text: &str) -> Result<RootMultiset, Failure> {
    let t = text.trim();
    if t.starts_with('[') || t.starts_with('{') {
        let parsed: RootsJson = serde_json::from_str(t).map_err(Failure::usage)?;
        let entries = match parsed {
            RootsJson::List(v) | RootsJson::Object { roots: v } => v,
        };
        let mut out = RootMultiset::new();
        for e in entries {
            out.add(rational(&e.root)?, e.mult);
        }
        return Ok(out);
    }
    RootMultiset::parse_product(t).map_err(Failure::usage)
}

pub fn user_bfunction(text: &str) -> Result<BFunction, Failure> {
    BFunction::new(root_multiset(text)?, Provenance::UserSupplied).map_err(Failure::hypothesis)
}

/// Negative twists have no formulas; zero is read as one, since `O(*f) = O(*f) f^{-1}`.
pub fn route_alpha(alpha: &Rational) -> Result<(Rational, Option<String>), Failure> {
    if *alpha < int(0) {
        return Err(Failure::Hypothesis(format!("alpha = {alpha} is negative")));
    }
    if *alpha == int(0) {
        return Ok((int(1), Some("alpha = 0 is computed as alpha = 1: O(*f) equals O(*f) f^-1".into())));
    }
    Ok((alpha.clone(), None))
}

/// The divisor a command works on.
#[derive(Clone, Debug)]
pub enum Germ {
    Snc(SncDivisor),
    Whom(QuasiHomogeneousGerm),
    /// Only a b-function, for the invariants that need nothing else.
    Roots { b: BFunction, dim: Option<usize> },
}

/// The flags that describe a divisor.
#[derive(Clone, Debug, Default)]
pub struct GermSpec {
    pub exponents: Option<String>,
    pub poly: Option<String>,
    pub weights: Option<String>,
    pub b: Option<String>,
    pub dim: Option<usize>,
}

impl GermSpec {
    pub fn resolve(&self) -> Result<Germ, Failure> {
        let given = [self.exponents.is_some(), self.poly.is_some(), self.b.is_some()];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(Failure::Usage("give exactly one of --exponents, --poly or --b".into()));
        }
        if let Some(e) = &self.exponents {
            if self.weights.is_some() {
                return Err(Failure::Usage("--weights only applies to --poly".into()));
            }
            return snc(u32_list(e)?);
        }
        if let Some(b) = &self.b {
            return Ok(Germ::Roots { b: user_bfunction(b)?, dim: self.dim });
        }
        let text = self.poly.as_deref().unwrap_or_default();
        match &self.weights {
            Some(w) => {
                let w = WeightVector::new(rational_list(w)?).map_err(Failure::usage)?;
                let f = Polynomial::parse(text, w.dim()).map_err(Failure::usage)?;
                QuasiHomogeneousGerm::new(f, w).map(Germ::Whom).map_err(Failure::hypothesis)
            }
            None => {
                let f = Polynomial::parse_auto(text).map_err(Failure::usage)?;
                let dim = self.dim.unwrap_or(f.dim()).max(f.dim());
                let f = f.embed(dim);
                match f.leading() {
                    Some((m, c)) if f.is_monomial() && *c == int(1) => snc(m.exps().to_vec()),
                    _ => Err(Failure::Usage(
                        "a polynomial that is not a monic monomial needs --weights".into(),
                    )),
                }
            }
        }
    }
}

fn snc(exponents: Vec<u32>) -> Result<Germ, Failure> {
    SncDivisor::new(exponents).map(Germ::Snc).map_err(Failure::hypothesis)
}

impl Germ {
    pub fn f(&self) -> Option<Polynomial> {
        match self {
            Germ::Snc(d) => Some(d.f()),
            Germ::Whom(g) => Some(g.f().clone()),
            Germ::Roots { .. } => None,
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            Germ::Snc(d) => Some(d.dim()),
            Germ::Whom(g) => Some(g.dim()),
            Germ::Roots { dim, .. } => *dim,
        }
    }

    /// The closed-form b-function, unverified.
    pub fn bfunction(&self) -> Result<BFunction, Failure> {
        match self {
            Germ::Snc(d) => bfunction_snc(d.exponents()).map_err(Failure::hypothesis),
            Germ::Whom(g) => g.bfunction().map_err(Failure::hypothesis),
            Germ::Roots { b, .. } => Ok(b.clone()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Germ::Snc(_) => "normal-crossing",
            Germ::Whom(_) => "quasi-homogeneous",
            Germ::Roots { .. } => "b-function",
        }
    }
}

fn header<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(key)?.trim_start();
    rest.strip_prefix(':').map(str::trim)
}

/// Parses an annihilator file: header lines `f:`, `E:`, `alpha:`, `b:`, `pp:` (and an optional
/// `dim:`), then one annihilating operator per line. `#` starts a comment.
pub fn annihilator_file(text: &str) -> Result<AnnihilatorInput, Failure> {
    let mut f = None;
    let mut euler = None;
    let mut alpha = None;
    let mut b = None;
    let mut pp = None;
    let mut dim = None;
    let mut ops = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let at = |m: String| Failure::Usage(format!("line {}: {m}", no + 1));
        if let Some(v) = header(line, "f") {
            f = Some(v.to_string());
        } else if let Some(v) = header(line, "E") {
            euler = Some(v.to_string());
        } else if let Some(v) = header(line, "alpha") {
            alpha = Some(rational(v).map_err(|e| at(e.to_string()))?);
        } else if let Some(v) = header(line, "b") {
            b = Some(v.to_string());
        } else if let Some(v) = header(line, "pp") {
            pp = Some(match v {
                "true" => true,
                "false" => false,
                _ => return Err(at(format!("pp must be true or false, not {v:?}"))),
            });
        } else if let Some(v) = header(line, "dim") {
            dim = Some(v.parse::<usize>().map_err(|_| at(format!("bad dimension {v:?}")))?);
        } else {
            ops.push(line.to_string());
        }
    }
    let missing = |k: &str| Failure::Usage(format!("annihilator file has no `{k}:` line"));
    let f = f.ok_or_else(|| missing("f"))?;
    let euler = euler.ok_or_else(|| missing("E"))?;
    let b = b.ok_or_else(|| missing("b"))?;
    let dim = match dim {
        Some(d) => d,
        None => {
            let mut d = Polynomial::parse_auto(&f).map_err(Failure::usage)?.dim();
            for op in ops.iter().chain(std::iter::once(&euler)) {
                d = d.max(WeylOperator::parse_auto(op).map_err(Failure::usage)?.dim());
            }
            d
        }
    };
    let parse_op = |t: &str| WeylOperator::parse(t, dim).map_err(Failure::usage);
    Ok(AnnihilatorInput {
        f: Polynomial::parse(&f, dim).map_err(Failure::usage)?,
        euler: parse_op(&euler)?,
        zetas: ops.iter().map(|t| parse_op(t)).collect::<Result<_, _>>()?,
        alpha: alpha.unwrap_or_else(|| int(0)),
        b: user_bfunction(&b)?,
        pp_asserted: pp.unwrap_or(false),
    })
}
