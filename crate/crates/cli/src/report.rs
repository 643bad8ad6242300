//! The JSON report. Field order follows the struct declarations, so output is
//! byte-identical for identical inputs.

use icc_core::analyzer::{ExtensionSpec, LiftEvidence, Report, TorsionElement, Verdict, WitnessElement};
use icc_core::catalog::Word;
use icc_core::oracle::{BallStatus, CrossCheck, Probe};
use icc_core::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

pub const TOOL_NAME: &str = "icc";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
pub struct JsonReport {
    pub tool: Tool,
    pub verdict: &'static str,
    pub obstruction: Option<String>,
    pub theorem_path: &'static str,
    pub witness: Option<JsonWitness>,
    pub witnesses: Vec<JsonWitness>,
    pub condition_results: Vec<JsonCondition>,
    pub oracle_crosscheck: Option<JsonCrossCheck>,
}

#[derive(Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Serialize)]
pub struct JsonCondition {
    pub name: &'static str,
    pub status: &'static str,
    pub detail: String,
}

#[derive(Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JsonWitness {
    KernelTorsion {
        element: String,
        class_bound: u64,
    },
    KernelVector {
        vector: Vec<Value>,
        orbit: Vec<Vec<Value>>,
        class_size: usize,
    },
    QuotientLift {
        word: String,
        evidence: JsonEvidence,
    },
}

#[derive(Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JsonEvidence {
    IdentityMatrix,
    InnerConjugator { conjugator: String },
    TrivialKernel,
}

#[derive(Serialize)]
pub struct JsonCrossCheck {
    /// `consistent`, `inconsistent` or `unsupported`.
    pub status: &'static str,
    pub reason: Option<String>,
    pub radius: usize,
    pub cap: usize,
    pub witness_probes: Vec<JsonProbe>,
    pub sample_probes: Vec<JsonProbe>,
}

#[derive(Serialize)]
pub struct JsonProbe {
    pub element: String,
    pub sizes: Vec<usize>,
    /// `closed`, `still_growing` or `cap_exceeded`.
    pub status: &'static str,
    pub closed_radius: Option<usize>,
    pub class_size: Option<usize>,
}

/// Integers are JSON numbers when they fit in `i64`, decimal strings
/// otherwise.
pub fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

fn vector_value(v: &[BigInt]) -> Vec<Value> {
    v.iter().map(int_value).collect()
}

fn kernel_names(spec: &ExtensionSpec) -> Option<&[String]> {
    match spec.kernel() {
        icc_core::analyzer::KernelDesc::Free { names } => Some(names),
        _ => None,
    }
}

fn word_text(w: &Word, names: Option<&[String]>) -> String {
    match names {
        Some(ns) => w.display_with(ns).to_string(),
        None => w.to_string(),
    }
}

pub fn witness_json(spec: &ExtensionSpec, w: &WitnessElement) -> JsonWitness {
    match w {
        WitnessElement::KernelTorsion { element, class_bound } => JsonWitness::KernelTorsion {
            element: match element {
                TorsionElement::Abelian { .. } => element.to_string(),
                TorsionElement::Permutation(p) => p.to_string(),
            },
            class_bound: *class_bound,
        },
        WitnessElement::KernelVector { vector, orbit } => JsonWitness::KernelVector {
            vector: vector_value(vector),
            orbit: orbit.iter().map(|v| vector_value(v)).collect(),
            class_size: orbit.len(),
        },
        WitnessElement::QuotientLift { word, evidence } => JsonWitness::QuotientLift {
            word: word.display_with(spec.labels()).to_string(),
            evidence: match evidence {
                LiftEvidence::IdentityMatrix => JsonEvidence::IdentityMatrix,
                LiftEvidence::InnerConjugator(c) => JsonEvidence::InnerConjugator {
                    conjugator: word_text(c, kernel_names(spec)),
                },
                LiftEvidence::TrivialKernel => JsonEvidence::TrivialKernel,
            },
        },
    }
}

fn probe_json(p: &Probe) -> JsonProbe {
    let (status, closed_radius) = match p.curve.status {
        BallStatus::Closed { radius } => ("closed", Some(radius)),
        BallStatus::StillGrowing { cap_exceeded: false } => ("still_growing", None),
        BallStatus::StillGrowing { cap_exceeded: true } => ("cap_exceeded", None),
    };
    JsonProbe {
        element: p.element.to_string(),
        sizes: p.curve.sizes.clone(),
        status,
        closed_radius,
        class_size: closed_radius.map(|_| p.curve.final_size()),
    }
}

pub fn crosscheck_json(x: &CrossCheck) -> JsonCrossCheck {
    JsonCrossCheck {
        status: if x.consistent { "consistent" } else { "inconsistent" },
        reason: None,
        radius: x.radius,
        cap: x.cap,
        witness_probes: x.witness_probes.iter().map(probe_json).collect(),
        sample_probes: x.sample_probes.iter().map(probe_json).collect(),
    }
}

pub fn unsupported_crosscheck(reason: String, radius: usize, cap: usize) -> JsonCrossCheck {
    JsonCrossCheck {
        status: "unsupported",
        reason: Some(reason),
        radius,
        cap,
        witness_probes: Vec::new(),
        sample_probes: Vec::new(),
    }
}

pub fn report_json(spec: &ExtensionSpec, report: &Report, oracle: Option<JsonCrossCheck>) -> JsonReport {
    let witnesses: Vec<JsonWitness> = report
        .verdict
        .witnesses()
        .iter()
        .map(|w| witness_json(spec, w))
        .collect();
    JsonReport {
        tool: Tool {
            name: TOOL_NAME,
            version: TOOL_VERSION,
        },
        verdict: report.verdict.tag(),
        obstruction: match &report.verdict {
            Verdict::Unknown { obstruction } => Some(obstruction.clone()),
            _ => None,
        },
        theorem_path: report.theorem_path.tag(),
        witness: witnesses.first().cloned(),
        witnesses,
        condition_results: report
            .conditions
            .iter()
            .map(|c| JsonCondition {
                name: c.name,
                status: c.status.tag(),
                detail: c.detail.clone(),
            })
            .collect(),
        oracle_crosscheck: oracle,
    }
}

/// Plain-text rendering of the same content.
pub fn report_text(r: &JsonReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("verdict: {}\n", r.verdict));
    if let Some(o) = &r.obstruction {
        s.push_str(&format!("obstruction: {o}\n"));
    }
    s.push_str(&format!("path: {}\n", r.theorem_path));
    s.push_str("conditions:\n");
    for c in &r.condition_results {
        s.push_str(&format!("  {:<22} {:<13} {}\n", c.name, c.status, c.detail));
    }
    for (i, w) in r.witnesses.iter().enumerate() {
        let line = match w {
            JsonWitness::KernelTorsion { element, class_bound } => {
                format!("kernel torsion element {element}, class size at most {class_bound}")
            }
            JsonWitness::KernelVector {
                vector,
                orbit,
                class_size,
            } => {
                let fmt = |v: &[Value]| {
                    let parts: Vec<String> = v.iter().map(value_text).collect();
                    format!("({})", parts.join(","))
                };
                let orbit: Vec<String> = orbit.iter().map(|v| fmt(v)).collect();
                format!(
                    "kernel vector {} with class {{{}}} of size {class_size}",
                    fmt(vector),
                    orbit.join(", ")
                )
            }
            JsonWitness::QuotientLift { word, evidence } => {
                let why = match evidence {
                    JsonEvidence::IdentityMatrix => "acts as the identity matrix".to_string(),
                    JsonEvidence::InnerConjugator { conjugator } => {
                        format!("acts as conjugation by {conjugator}")
                    }
                    JsonEvidence::TrivialKernel => "lies in FC(Q) and K is trivial".to_string(),
                };
                format!("quotient element {word} {why}")
            }
        };
        s.push_str(&format!("witness {}: {line}\n", i + 1));
    }
    if let Some(x) = &r.oracle_crosscheck {
        match &x.reason {
            Some(reason) => s.push_str(&format!("oracle: {} ({reason})\n", x.status)),
            None => {
                s.push_str(&format!("oracle: {} at radius {}, cap {}\n", x.status, x.radius, x.cap));
                for (kind, probes) in [("witness", &x.witness_probes), ("sample", &x.sample_probes)] {
                    for p in probes {
                        let size = p.class_size.map_or(String::new(), |n| format!(", class size {n}"));
                        s.push_str(&format!("  {kind} {}: {}{size}\n", p.element, p.status));
                    }
                }
            }
        }
    }
    s
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
