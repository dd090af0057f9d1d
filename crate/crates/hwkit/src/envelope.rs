//! The JSON result envelope and renderings of core results.

use hwkit_core::bsdata::BFunction;
use hwkit_core::exactalg::{MonomialIdeal, Polynomial, Rational};
use hwkit_core::snc::HodgePresentation;
use hwkit_core::vforacle::{
    AxiomReport, BfunctionCertificate, Bounds, CrosscheckReport, SpanCertificate, TwoSided, WitnessTerm,
};
use hwkit_core::weyl::WeylOperator;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Status;

pub const TOOL: &str = "hwkit";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsEcho {
    pub order: u32,
    pub xdeg: u32,
    pub dt_order: u32,
}

impl From<Bounds> for BoundsEcho {
    fn from(b: Bounds) -> Self {
        BoundsEcho { order: b.order, xdeg: b.xdeg, dt_order: b.dt_order }
    }
}

/// Everything one command reports. Field order is fixed and maps are sorted, so equal
/// results serialize to equal bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub status: Status,
    pub inputs: Value,
    pub bounds: Option<BoundsEcho>,
    pub provenance: Vec<String>,
    pub outputs: Value,
    pub certificates: Vec<Value>,
    pub messages: Vec<String>,
}

impl ResultEnvelope {
    pub fn new(command: &str, inputs: Value) -> Self {
        ResultEnvelope {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            status: Status::Ok,
            inputs,
            bounds: None,
            provenance: Vec::new(),
            outputs: Value::Null,
            certificates: Vec::new(),
            messages: Vec::new(),
        }
    }

    pub fn with_bounds(mut self, b: Bounds) -> Self {
        self.bounds = Some(b.into());
        self
    }

    pub fn tag(&mut self, provenance: &str) {
        if !self.provenance.iter().any(|p| p == provenance) {
            self.provenance.push(provenance.into());
        }
    }

    pub fn note(&mut self, message: impl Into<String>) {
        self.messages.push(message.into());
    }

    pub fn degrade(&mut self, status: Status) {
        self.status = self.status.join(status);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelope serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Plain-text form for terminals.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}: {}\n", self.tool, self.command, status_word(self.status));
        if let Some(b) = &self.bounds {
            out.push_str(&format!("bounds: order {} / xdeg {} / dt-order {}\n", b.order, b.xdeg, b.dt_order));
        }
        if !self.provenance.is_empty() {
            out.push_str(&format!("provenance: {}\n", self.provenance.join(", ")));
        }
        text_value(&self.outputs, 0, &mut out);
        for m in &self.messages {
            out.push_str(&format!("note: {m}\n"));
        }
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::HypothesisFailed => "hypothesis not satisfied",
        Status::Inconclusive => "inconclusive at bounds",
        Status::Refuted => "refuted",
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn text_value(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_value(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        text_value(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

pub fn rational(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn poly(p: &Polynomial) -> Value {
    Value::String(p.to_string())
}

pub fn operator(p: &WeylOperator) -> Value {
    Value::String(p.to_string())
}

pub fn ideal(i: &MonomialIdeal) -> Value {
    Value::Array(i.generator_polys().iter().map(poly).collect())
}

pub fn bounds(b: &Bounds) -> Value {
    json!({ "order": b.order, "xdeg": b.xdeg, "dt_order": b.dt_order })
}

pub fn presentation(p: &HodgePresentation) -> Value {
    json!({
        "twist": rational(&p.twist),
        "span_closed": p.span_closed,
        "summands": p.summands.iter().map(|s| json!({
            "budget": s.budget,
            "generator": poly(&s.generator),
            "pole_step": s.pole_step,
        })).collect::<Vec<_>>(),
        "text": p.to_string(),
    })
}

pub fn bfunction(b: &BFunction) -> Value {
    json!({
        "roots": b.roots().iter().map(|(r, m)| json!({ "root": r.to_string(), "mult": m })).collect::<Vec<_>>(),
        "provenance": b.provenance(),
        "verified": b.is_verified(),
    })
}

fn witness(w: &[WitnessTerm]) -> Value {
    Value::Array(
        w.iter().map(|t| json!({ "generator": t.generator, "operator": operator(&t.operator) })).collect(),
    )
}

/// `{verdict, bounds, witness?, note?}`.
pub fn certificate(c: &SpanCertificate) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("verdict".into(), Value::String(c.verdict.as_str().into()));
    m.insert("bounds".into(), bounds(&c.bounds));
    if c.is_member() {
        m.insert("witness".into(), Value::Array(c.witnesses.iter().map(|w| witness(w)).collect()));
    }
    if let Some(n) = &c.note {
        m.insert("note".into(), Value::String(n.clone()));
    }
    Value::Object(m)
}

pub fn two_sided(t: &TwoSided) -> Value {
    json!({
        "verdict": t.verdict().as_str(),
        "forward": certificate(&t.forward),
        "backward": certificate(&t.backward),
    })
}

pub fn bfunction_certificate(c: &BfunctionCertificate) -> Value {
    json!({
        "equation": certificate(&c.equation),
        "divisors": c.divisors.iter().map(|d| json!({
            "removed_root": rational(&d.removed_root),
            "divisor": d.divisor.to_string(),
            "verdict": d.verdict.as_str(),
        })).collect::<Vec<_>>(),
        "minimal_at_bound": c.minimal_at_bound(),
    })
}

pub fn axiom_report(r: &AxiomReport) -> Value {
    json!({
        "all_member": r.all_member(),
        "checks": r.checks.iter().map(|c| json!({
            "axiom": c.kind.as_str(),
            "gamma": rational(&c.gamma),
            "certificate": certificate(&c.certificate),
        })).collect::<Vec<_>>(),
    })
}

pub fn crosscheck(r: &CrosscheckReport) -> Value {
    json!({
        "verdict": r.verdict().as_str(),
        "kernel": certificate(&r.kernel),
        "images": two_sided(&r.images),
        "closed_form": presentation(&r.closed_form),
        "kernel_generators": r.kernel_generators.iter().map(|g| json!({
            "element": g.element.to_string(),
            "budget": g.budget,
        })).collect::<Vec<_>>(),
    })
}
