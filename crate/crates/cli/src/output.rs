//! Result documents: a versioned JSON schema and a plain text rendering.
//!
//! Exact values are `p/q` strings and are authoritative; decimals are a
//! rounded display aid.

use serde::Serialize;
use sha2::{Digest, Sha256};
use wmp_core::rational::{decimal_string, exact_string};
use wmp_core::{AnalysisResult, Rational};

pub const SCHEMA: u32 = 1;
pub const DECIMAL_DIGITS: usize = 12;
pub const DECIMAL_NOTE: &str = "decimal rendering is rounded to 12 significant digits and not authoritative";

/// Hex SHA-256 of the canonical model text.
pub fn model_hash(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObjectiveDoc {
    pub kind: String,
    pub lmax: Option<u32>,
    pub flavor: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassDoc {
    pub value: String,
    pub probability: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentDoc {
    pub kind: String,
    pub states: Vec<String>,
    pub reach_probability: Option<String>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisDoc {
    pub schema: u32,
    pub command: &'static str,
    pub model_kind: &'static str,
    pub model_hash: String,
    pub objective: ObjectiveDoc,
    pub algorithm: String,
    pub value: String,
    pub value_decimal: String,
    pub decimal_note: &'static str,
    pub distribution: Option<Vec<MassDoc>>,
    pub components: Vec<ComponentDoc>,
    pub notes: Vec<String>,
    pub timing_ms: f64,
}

pub fn decimal(v: &Rational) -> String {
    decimal_string(v, DECIMAL_DIGITS)
}

impl AnalysisDoc {
    pub fn new(
        model_kind: &'static str,
        model_hash: String,
        algorithm: &str,
        result: &AnalysisResult,
        state_names: &[String],
        extra_notes: Vec<String>,
        timing_ms: f64,
    ) -> Self {
        let o = &result.objective;
        let mut notes = result.notes.clone();
        notes.extend(extra_notes);
        AnalysisDoc {
            schema: SCHEMA,
            command: "analyze",
            model_kind,
            model_hash,
            objective: ObjectiveDoc { kind: o.kind().name().into(), lmax: o.window(), flavor: o.flavor().name().into() },
            algorithm: algorithm.into(),
            value: exact_string(&result.value),
            value_decimal: decimal(&result.value),
            decimal_note: DECIMAL_NOTE,
            distribution: result.distribution.as_ref().map(|d| {
                d.iter().map(|(v, p)| MassDoc { value: exact_string(v), probability: exact_string(p) }).collect()
            }),
            components: result
                .components
                .iter()
                .map(|c| ComponentDoc {
                    kind: c.kind.name().into(),
                    states: c.states.iter().map(|&s| state_names[s].clone()).collect(),
                    reach_probability: c.reach_probability.as_ref().map(exact_string),
                    value: exact_string(&c.value),
                })
                .collect(),
            notes,
            timing_ms,
        }
    }

    pub fn text(&self) -> String {
        let mut out = format!(
            "objective: {}{} ({})\nvalue: {}  (~{})\n",
            self.objective.kind,
            self.objective.lmax.map(|l| format!(" lmax={l}")).unwrap_or_default(),
            self.objective.flavor,
            self.value,
            self.value_decimal
        );
        if let Some(d) = &self.distribution {
            out.push_str("distribution:\n");
            for m in d {
                out.push_str(&format!("  {} with probability {}\n", m.value, m.probability));
            }
        }
        for c in &self.components {
            let reach = c.reach_probability.as_ref().map(|p| format!(" reached with probability {p}")).unwrap_or_default();
            out.push_str(&format!("{} {{{}}}{reach}: {}\n", c.kind, c.states.join(", "), c.value));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationDoc {
    pub schema: u32,
    pub command: &'static str,
    pub model_hash: String,
    pub objective: ObjectiveDoc,
    pub samples: usize,
    pub horizon: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub mean: f64,
    pub std_dev: f64,
    pub std_err: f64,
    /// `mean -/+ 4 * std_err`.
    pub interval: (f64, f64),
    pub timing_ms: f64,
}

impl SimulationDoc {
    pub fn text(&self) -> String {
        format!(
            "objective: {} lmax={}\nestimate: {} +/- {} (std err, {} samples)\ninterval (4 sigma): [{}, {}]\n",
            self.objective.kind,
            self.objective.lmax.unwrap_or_default(),
            self.mean,
            self.std_err,
            self.samples,
            self.interval.0,
            self.interval.1
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateMassDoc {
    pub state: String,
    pub mass: String,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoodWindowDoc {
    pub schema: u32,
    pub command: &'static str,
    pub model_hash: String,
    pub p: String,
    pub lmax: u32,
    pub lambda: String,
    pub holds: bool,
    pub states: Vec<StateMassDoc>,
    pub timing_ms: f64,
}

impl GoodWindowDoc {
    pub fn text(&self) -> String {
        let mut out = format!("good windows with probability >= {} (lmax={}, lambda={}): {}\n", self.p, self.lmax, self.lambda, if self.holds { "holds" } else { "fails" });
        for s in &self.states {
            out.push_str(&format!("  {}: {}{}\n", s.state, s.mass, if s.satisfied { "" } else { "  (below p)" }));
        }
        out
    }
}
