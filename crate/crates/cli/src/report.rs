//! Report structure and its JSON and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use mlk_core::twisthopf::SuiteReport;

use crate::jobspec::JobSpec;

pub const SCHEMA_VERSION: u32 = 1;

/// One verification suite in a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteLine {
    pub label: String,
    pub checked: u64,
    pub failures: u64,
    pub witness: Option<String>,
}

impl SuiteLine {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn from_suite(prefix: &str, s: &SuiteReport) -> Self {
        let label = if prefix.is_empty() { s.name.clone() } else { format!("{prefix}{}", s.name) };
        SuiteLine { label, checked: s.checked, failures: s.failures, witness: s.witness.clone() }
    }

    /// A yes/no check counted as `checked` identities.
    pub fn verdict(label: impl Into<String>, checked: u64, ok: bool, witness: impl FnOnce() -> String) -> Self {
        SuiteLine {
            label: label.into(),
            checked,
            failures: u64::from(!ok),
            witness: if ok { None } else { Some(witness()) },
        }
    }
}

/// The resolved run setting: defaults filled in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Settings {
    pub field: String,
    pub precision: Option<u32>,
    pub orientation: Option<String>,
    pub n: i64,
    pub window: i64,
    pub psi_conductor: i64,
    pub psi_unit: i64,
    pub kappa: Option<usize>,
    pub bisector_source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub job: JobSpec,
    pub settings: Settings,
    pub sections: BTreeMap<String, Value>,
    pub suites: Vec<SuiteLine>,
    pub passed: bool,
}

impl Report {
    pub fn failing(&self) -> impl Iterator<Item = &SuiteLine> {
        self.suites.iter().filter(|s| !s.passed())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let st = &self.settings;
        let _ = writeln!(out, "mlk {} (schema {})", self.command, self.schema_version);
        let _ = writeln!(
            out,
            "n = {}, field {}, psi = conductor {} unit {}, window {}, bisector {}",
            st.n, st.field, st.psi_conductor, st.psi_unit, st.window, st.bisector_source
        );
        for (name, body) in &self.sections {
            let _ = writeln!(out, "\n== {name} ==");
            render_value(&mut out, body);
        }
        if !self.suites.is_empty() {
            let _ = writeln!(out, "\n== suites ==");
            for s in &self.suites {
                let mark = if s.passed() { "PASS" } else { "FAIL" };
                let _ = write!(out, "{mark} {} (checked {}", s.label, s.checked);
                if s.failures > 0 {
                    let _ = write!(out, ", failures {}", s.failures);
                }
                out.push(')');
                if let Some(w) = &s.witness {
                    let _ = write!(out, ": {w}");
                }
                out.push('\n');
            }
        }
        let failing = self.failing().count();
        let _ = if failing == 0 {
            writeln!(out, "\nstatus: pass ({} suites)", self.suites.len())
        } else {
            writeln!(out, "\nstatus: {failing} of {} suites have witnesses", self.suites.len())
        };
        out
    }
}

fn render_value(out: &mut String, body: &Value) {
    let Value::Object(map) = body else {
        let _ = writeln!(out, "{body}");
        return;
    };
    if let Some(Value::Array(lines)) = map.get("summary") {
        for l in lines {
            match l {
                Value::String(s) => {
                    let _ = writeln!(out, "{s}");
                }
                other => {
                    let _ = writeln!(out, "{other}");
                }
            }
        }
    }
    for (k, v) in map {
        if k != "summary" {
            let _ = writeln!(out, "  {k}: {v}");
        }
    }
}
