//! The task report emitted on standard output.

use quasiq::report::{BracketReport, ConditionOutcome};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub name: String,
    pub status: &'static str,
    pub checked: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<String>,
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

impl From<&ConditionOutcome> for Entry {
    fn from(c: &ConditionOutcome) -> Entry {
        Entry {
            name: c.name.clone(),
            status: status(c.passed()),
            checked: c.checked,
            failures: c.failures,
            residual: c.residual.as_ref().filter(|r| !r.is_zero()).map(|r| r.to_string()),
            witness: c.witness.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub task: String,
    pub status: &'static str,
    pub entries: Vec<Entry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub timing_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<serde_json::Value>,
}

impl Report {
    pub fn new(task: &str) -> Report {
        Report {
            task: task.into(),
            status: "pass",
            entries: Vec::new(),
            notes: Vec::new(),
            timing_ms: 0.0,
            output: None,
        }
    }

    pub fn add(&mut self, r: &BracketReport) {
        self.entries.extend(r.entries.iter().map(Entry::from));
        self.notes.extend(r.notes.iter().cloned());
        self.refresh();
    }

    pub fn add_outcome(&mut self, c: &ConditionOutcome) {
        self.entries.push(c.into());
        self.refresh();
    }

    pub fn fail(&mut self, note: String) {
        self.notes.push(note);
        self.status = "fail";
    }

    fn refresh(&mut self) {
        if self.entries.iter().any(|e| e.status == "fail") {
            self.status = "fail";
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn text(&self) -> String {
        let mut out = format!("task: {}\n", self.task);
        for e in &self.entries {
            out.push_str(&format!("[{}] {} ({} checked)", e.status.to_uppercase(), e.name, e.checked));
            if let Some(r) = &e.residual {
                out.push_str(&format!(" residual: {r}"));
                if !e.witness.is_empty() {
                    out.push_str(&format!(" at ({})", e.witness.join(", ")));
                }
            }
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        if let Some(o) = &self.output {
            out.push_str("output:\n");
            out.push_str(&serde_json::to_string_pretty(o).unwrap_or_default());
            out.push('\n');
        }
        out.push_str(&format!("status: {} ({:.1} ms)\n", self.status, self.timing_ms));
        out
    }
}
