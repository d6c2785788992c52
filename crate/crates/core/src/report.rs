use std::fmt;

use crate::kernel::{Derivation, Poly};

/// A nonzero (or zero) remainder of an identity check.
#[derive(Clone, PartialEq, Eq)]
pub enum Residual {
    Poly(Poly),
    Derivation(Derivation),
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Poly(p) => p.is_zero(),
            Residual::Derivation(d) => d.is_zero(),
        }
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Poly(p) => write!(f, "{p}"),
            Residual::Derivation(d) => write!(f, "{d}"),
        }
    }
}

impl fmt::Debug for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Outcome of one named condition, possibly checked on many inputs.
#[derive(Clone, Debug)]
pub struct ConditionOutcome {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    /// Residual of the first failure.
    pub residual: Option<Residual>,
    /// Inputs of the first failure, rendered.
    pub witness: Vec<String>,
}

impl ConditionOutcome {
    pub fn new(name: impl Into<String>) -> Self {
        ConditionOutcome {
            name: name.into(),
            checked: 0,
            failures: 0,
            residual: None,
            witness: Vec::new(),
        }
    }

    /// A condition decided by one residual.
    pub fn from_residual(name: impl Into<String>, residual: Residual) -> Self {
        let mut c = ConditionOutcome::new(name);
        c.record(residual, Vec::new());
        c
    }

    pub fn from_poly(name: impl Into<String>, residual: Poly) -> Self {
        ConditionOutcome::from_residual(name, Residual::Poly(residual))
    }

    pub fn record(&mut self, residual: Residual, witness: Vec<String>) {
        self.checked += 1;
        if !residual.is_zero() {
            self.failures += 1;
            if self.residual.is_none() {
                self.residual = Some(residual);
                self.witness = witness;
            }
        }
    }

    pub fn merge(&mut self, other: ConditionOutcome) {
        self.checked += other.checked;
        self.failures += other.failures;
        if self.residual.is_none() {
            self.residual = other.residual;
            self.witness = other.witness;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Per-condition outcomes of a verification. Passes iff every entry passes.
#[derive(Clone, Debug, Default)]
pub struct BracketReport {
    pub entries: Vec<ConditionOutcome>,
    pub notes: Vec<String>,
}

impl BracketReport {
    pub fn new() -> Self {
        BracketReport::default()
    }

    pub fn push(&mut self, c: ConditionOutcome) {
        self.entries.push(c);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(ConditionOutcome::passed)
    }

    pub fn entry(&self, name: &str) -> Option<&ConditionOutcome> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn failed_names(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| !e.passed())
            .map(|e| e.name.as_str())
            .collect()
    }
}

impl fmt::Display for BracketReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let status = if e.passed() { "PASS" } else { "FAIL" };
            write!(f, "[{status}] {} ({} checked", e.name, e.checked)?;
            if e.failures > 0 {
                write!(f, ", {} failed", e.failures)?;
            }
            f.write_str(")")?;
            if let Some(r) = &e.residual {
                write!(f, " residual: {r}")?;
                if !e.witness.is_empty() {
                    write!(f, " at ({})", e.witness.join(", "))?;
                }
            }
            writeln!(f)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
