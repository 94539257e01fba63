//! Machine-readable reports with byte-deterministic rendering.
//!
//! JSON objects keep their keys sorted and floats are printed with 17
//! significant digits (`{:.16e}`), which round-trips every f64 exactly.
//! Two runs with the same configuration therefore produce identical
//! bytes, and that determinism is part of the contract.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::hidden::{ChshEstimate, CONTEXT_LABELS};
use crate::measure::{
    AdmissibilityReport, AxiomViolation, MeasureReport, ProbabilityMeasure, SigmaAlgebra,
};

/// The shared-space ceiling for the CHSH statistic with ±1/2 outcomes.
pub const CHSH_BOUND: f64 = 0.5;
/// The quantum value at the optimal angles, pinned to the eight digits the
/// report schema prints; deliberately not the full-precision 1/sqrt(2).
#[allow(clippy::approx_constant)]
pub const QUANTUM_TARGET: f64 = 0.70710678;
/// Event lists longer than this are omitted from algebra reports.
pub const MAX_LISTED_EVENTS: usize = 4096;

/// Which probability-space regime produced a CHSH run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    Shared,
    PerContext,
}

impl SamplingMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SamplingMode::Shared => "shared",
            SamplingMode::PerContext => "per-context",
        }
    }
}

/// A JSON document built for deterministic rendering: object keys are
/// sorted by the map, floats print at full precision.
#[derive(Debug, Clone, PartialEq)]
pub enum JsonValue {
    Null,
    Bool(bool),
    Int(u64),
    Float(f64),
    Str(String),
    Array(Vec<JsonValue>),
    Object(BTreeMap<String, JsonValue>),
}

impl JsonValue {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            JsonValue::Null => out.push_str("null"),
            JsonValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            JsonValue::Int(i) => out.push_str(&i.to_string()),
            JsonValue::Float(f) => out.push_str(&format_float(*f)),
            JsonValue::Str(s) => write_json_string(out, s),
            JsonValue::Array(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    item.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push(']');
            }
            JsonValue::Object(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    write_json_string(out, key);
                    out.push_str(": ");
                    value.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push('}');
            }
        }
    }
}

fn push_indent(out: &mut String, levels: usize) {
    for _ in 0..levels {
        out.push_str("  ");
    }
}

/// 17 significant digits: enough to reconstruct the exact f64.
pub fn format_float(value: f64) -> String {
    debug_assert!(value.is_finite(), "reports carry finite numbers only");
    format!("{value:.16e}")
}

fn write_json_string(out: &mut String, text: &str) {
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn object(fields: Vec<(&str, JsonValue)>) -> JsonValue {
    JsonValue::Object(
        fields
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
    )
}

fn members_array(members: &[usize]) -> JsonValue {
    JsonValue::Array(members.iter().map(|&m| JsonValue::Int(m as u64)).collect())
}

fn rational_string(value: &BigRational) -> JsonValue {
    JsonValue::Str(value.to_string())
}

/// Full record of one CHSH run.
#[derive(Debug, Clone)]
pub struct ChshReport {
    pub model: String,
    pub sampling: SamplingMode,
    pub angles: [f64; 4],
    pub samples: u64,
    pub seed: u64,
    pub estimate: ChshEstimate,
    /// Present only for per-context sampling.
    pub certified_disjoint: Option<bool>,
    /// Diagnostic only; never serialized, so report bytes stay a pure
    /// function of the configuration.
    pub wall_time_ms: f64,
}

impl ChshReport {
    fn contexts_json(&self) -> JsonValue {
        let mut contexts = BTreeMap::new();
        for (label, estimate) in CONTEXT_LABELS.iter().zip(&self.estimate.contexts) {
            contexts.insert(
                label.to_string(),
                object(vec![
                    ("E", JsonValue::Float(estimate.value)),
                    ("n", JsonValue::Int(estimate.n)),
                    ("std_error", JsonValue::Float(estimate.std_error)),
                ]),
            );
        }
        JsonValue::Object(contexts)
    }

    pub fn to_json(&self) -> String {
        let mut fields = vec![
            ("I", JsonValue::Float(self.estimate.i)),
            ("I_std_error", JsonValue::Float(self.estimate.i_std_error)),
            (
                "angles",
                JsonValue::Array(self.angles.iter().map(|&a| JsonValue::Float(a)).collect()),
            ),
            ("bound", JsonValue::Float(CHSH_BOUND)),
            ("contexts", self.contexts_json()),
            ("model", JsonValue::Str(self.model.clone())),
            ("quantum_target", JsonValue::Float(QUANTUM_TARGET)),
            ("samples", JsonValue::Int(self.samples)),
            ("sampling", JsonValue::Str(self.sampling.as_str().into())),
            ("seed", JsonValue::Int(self.seed)),
        ];
        if let Some(disjoint) = self.certified_disjoint {
            fields.push(("disjointness_certificate", JsonValue::Bool(disjoint)));
        }
        object(fields).render()
    }

    /// Four context rows plus a trailing summary row for I.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("context,E,std_error,n\n");
        for (label, estimate) in CONTEXT_LABELS.iter().zip(&self.estimate.contexts) {
            out.push_str(&format!(
                "{label},{},{},{}\n",
                format_float(estimate.value),
                format_float(estimate.std_error),
                estimate.n
            ));
        }
        out.push_str(&format!(
            "I,{},{},{}\n",
            format_float(self.estimate.i),
            format_float(self.estimate.i_std_error),
            self.samples
        ));
        out
    }
}

/// Record of an algebra build, with optional measure verification and
/// admissibility sections.
#[derive(Debug, Clone)]
pub struct AlgebraReport {
    pub space_size: usize,
    pub atoms: Vec<Vec<usize>>,
    pub event_count: usize,
    /// Every event's members and tags; omitted beyond MAX_LISTED_EVENTS.
    pub events: Option<Vec<(Vec<usize>, Vec<String>)>>,
    pub measure: Option<MeasureSection>,
    pub admissibility: Option<AdmissibilitySection>,
}

#[derive(Debug, Clone)]
pub struct MeasureSection {
    pub all_pass: bool,
    pub empty_probability: BigRational,
    pub total_probability: BigRational,
    pub events_checked: usize,
    pub disjoint_pairs_checked: usize,
    pub violations: Vec<JsonValue>,
}

#[derive(Debug, Clone)]
pub struct AdmissibilitySection {
    pub admissible: bool,
    pub events_checked: usize,
    pub offending: Vec<JsonValue>,
}

impl AlgebraReport {
    pub fn new(
        algebra: &SigmaAlgebra,
        measure: Option<(&ProbabilityMeasure, &MeasureReport)>,
        admissibility: Option<&AdmissibilityReport>,
    ) -> Self {
        let atoms = algebra
            .atoms()
            .iter()
            .map(|event| event.members())
            .collect();
        let events = if algebra.len() <= MAX_LISTED_EVENTS {
            Some(
                algebra
                    .events()
                    .iter()
                    .map(|e| (e.members(), e.tags().iter().cloned().collect()))
                    .collect(),
            )
        } else {
            None
        };
        Self {
            space_size: algebra.space().size(),
            atoms,
            event_count: algebra.len(),
            events,
            measure: measure.map(|(_, report)| MeasureSection::new(report)),
            admissibility: admissibility.map(AdmissibilitySection::new),
        }
    }

    pub fn to_json(&self) -> String {
        let mut fields = vec![
            (
                "atoms",
                JsonValue::Array(self.atoms.iter().map(|a| members_array(a)).collect()),
            ),
            ("event_count", JsonValue::Int(self.event_count as u64)),
            ("space_size", JsonValue::Int(self.space_size as u64)),
        ];
        if let Some(events) = &self.events {
            fields.push((
                "events",
                JsonValue::Array(
                    events
                        .iter()
                        .map(|(members, tags)| {
                            object(vec![
                                ("members", members_array(members)),
                                (
                                    "tags",
                                    JsonValue::Array(
                                        tags.iter().map(|t| JsonValue::Str(t.clone())).collect(),
                                    ),
                                ),
                            ])
                        })
                        .collect(),
                ),
            ));
        }
        if let Some(measure) = &self.measure {
            fields.push((
                "measure",
                object(vec![
                    ("all_pass", JsonValue::Bool(measure.all_pass)),
                    (
                        "disjoint_pairs_checked",
                        JsonValue::Int(measure.disjoint_pairs_checked as u64),
                    ),
                    (
                        "empty_probability",
                        rational_string(&measure.empty_probability),
                    ),
                    (
                        "events_checked",
                        JsonValue::Int(measure.events_checked as u64),
                    ),
                    (
                        "total_probability",
                        rational_string(&measure.total_probability),
                    ),
                    ("violations", JsonValue::Array(measure.violations.clone())),
                ]),
            ));
        }
        if let Some(adm) = &self.admissibility {
            fields.push((
                "admissibility",
                object(vec![
                    ("admissible", JsonValue::Bool(adm.admissible)),
                    ("events_checked", JsonValue::Int(adm.events_checked as u64)),
                    ("offending", JsonValue::Array(adm.offending.clone())),
                ]),
            ));
        }
        object(fields).render()
    }

    /// Scalar summary as key,value rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        out.push_str(&format!("space_size,{}\n", self.space_size));
        out.push_str(&format!("atom_count,{}\n", self.atoms.len()));
        out.push_str(&format!("event_count,{}\n", self.event_count));
        if let Some(measure) = &self.measure {
            out.push_str(&format!("measure_all_pass,{}\n", measure.all_pass));
            out.push_str(&format!(
                "measure_total_probability,{}\n",
                measure.total_probability
            ));
            out.push_str(&format!(
                "measure_violations,{}\n",
                measure.violations.len()
            ));
        }
        if let Some(adm) = &self.admissibility {
            out.push_str(&format!("admissible,{}\n", adm.admissible));
            out.push_str(&format!("offending_events,{}\n", adm.offending.len()));
        }
        out
    }
}

impl MeasureSection {
    pub fn new(report: &MeasureReport) -> Self {
        let violations = report
            .violations
            .iter()
            .map(|violation| match violation {
                AxiomViolation::ProbabilityOutOfRange { event, probability } => object(vec![
                    ("event", members_array(&event.members())),
                    ("kind", JsonValue::Str("probability_out_of_range".into())),
                    ("probability", rational_string(probability)),
                ]),
                AxiomViolation::EmptyNotZero { probability } => object(vec![
                    ("kind", JsonValue::Str("empty_not_zero".into())),
                    ("probability", rational_string(probability)),
                ]),
                AxiomViolation::NormalizationFailure { event, total } => object(vec![
                    ("event", members_array(&event.members())),
                    ("kind", JsonValue::Str("normalization".into())),
                    ("total", rational_string(total)),
                ]),
                AxiomViolation::AdditivityFailure {
                    left,
                    right,
                    union_probability,
                    sum,
                } => object(vec![
                    ("kind", JsonValue::Str("additivity".into())),
                    ("left", members_array(&left.members())),
                    ("right", members_array(&right.members())),
                    ("sum", rational_string(sum)),
                    ("union_probability", rational_string(union_probability)),
                ]),
            })
            .collect();
        Self {
            all_pass: report.all_pass(),
            empty_probability: report.empty_probability.clone(),
            total_probability: report.total_probability.clone(),
            events_checked: report.events_checked,
            disjoint_pairs_checked: report.disjoint_pairs_checked,
            violations,
        }
    }
}

impl AdmissibilitySection {
    pub fn new(report: &AdmissibilityReport) -> Self {
        let offending = report
            .offending
            .iter()
            .map(|(event, (a, b))| {
                object(vec![
                    (
                        "incompatible_pair",
                        JsonValue::Array(vec![
                            JsonValue::Str(a.clone()),
                            JsonValue::Str(b.clone()),
                        ]),
                    ),
                    ("members", members_array(&event.members())),
                    (
                        "tags",
                        JsonValue::Array(
                            event
                                .tags()
                                .iter()
                                .map(|t| JsonValue::Str(t.clone()))
                                .collect(),
                        ),
                    ),
                ])
            })
            .collect();
        Self {
            admissible: report.is_admissible(),
            events_checked: report.events_checked,
            offending,
        }
    }
}

/// Record of a noncontextual-assignment search.
#[derive(Debug, Clone)]
pub struct KsReport {
    pub directions: usize,
    pub triads: usize,
    pub satisfiable: bool,
    pub assignment: Option<BTreeMap<String, u8>>,
}

impl KsReport {
    pub fn to_json(&self) -> String {
        let assignment = match &self.assignment {
            Some(map) => JsonValue::Object(
                map.iter()
                    .map(|(k, v)| (k.clone(), JsonValue::Int(*v as u64)))
                    .collect(),
            ),
            None => JsonValue::Null,
        };
        object(vec![
            ("assignment", assignment),
            ("directions", JsonValue::Int(self.directions as u64)),
            ("satisfiable", JsonValue::Bool(self.satisfiable)),
            ("triads", JsonValue::Int(self.triads as u64)),
        ])
        .render()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        out.push_str(&format!("directions,{}\n", self.directions));
        out.push_str(&format!("triads,{}\n", self.triads));
        out.push_str(&format!("satisfiable,{}\n", self.satisfiable));
        if let Some(map) = &self.assignment {
            for (name, value) in map {
                out.push_str(&format!("assignment.{name},{value}\n"));
            }
        }
        out
    }
}

/// Record of a spin-1 agreement run.
#[derive(Debug, Clone)]
pub struct Spin1Report {
    pub flip_prob: f64,
    pub samples: u64,
    pub seed: u64,
    pub agreement: f64,
    pub std_error: f64,
    pub marginal_one: f64,
}

impl Spin1Report {
    pub fn to_json(&self) -> String {
        object(vec![
            ("agreement", JsonValue::Float(self.agreement)),
            ("flip_prob", JsonValue::Float(self.flip_prob)),
            ("marginal_one", JsonValue::Float(self.marginal_one)),
            ("samples", JsonValue::Int(self.samples)),
            ("seed", JsonValue::Int(self.seed)),
            ("std_error", JsonValue::Float(self.std_error)),
        ])
        .render()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        out.push_str(&format!("flip_prob,{}\n", format_float(self.flip_prob)));
        out.push_str(&format!("samples,{}\n", self.samples));
        out.push_str(&format!("seed,{}\n", self.seed));
        out.push_str(&format!("agreement,{}\n", format_float(self.agreement)));
        out.push_str(&format!("std_error,{}\n", format_float(self.std_error)));
        out.push_str(&format!(
            "marginal_one,{}\n",
            format_float(self.marginal_one)
        ));
        out
    }
}
