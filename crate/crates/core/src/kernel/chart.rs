use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::Parity;

/// A coordinate symbol with its Grassmann parity and ℤ-weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub parity: Parity,
    pub weight: i64,
}

impl Variable {
    pub fn new(name: impl Into<String>, parity: Parity, weight: i64) -> Self {
        Variable {
            name: name.into(),
            parity,
            weight,
        }
    }

    pub fn even(name: impl Into<String>, weight: i64) -> Self {
        Variable::new(name, Parity::Even, weight)
    }

    pub fn odd(name: impl Into<String>, weight: i64) -> Self {
        Variable::new(name, Parity::Odd, weight)
    }
}

/// How a chart entry participates in differentiation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// An ordinary coordinate.
    Coordinate,
    /// A Laurent generator `u = e^(−t)` for the named even coordinate `t`.
    /// It admits negative exponents and is not a coordinate itself: `∂/∂t`
    /// acts on it through `∂u/∂t = −u`.
    ExpNeg(String),
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct ChartData {
    vars: Vec<Variable>,
    kinds: Vec<VarKind>,
}

/// An ordered set of named variables. The order fixes the monomial normal form.
///
/// Charts are cheap to clone and compare by content.
#[derive(Clone)]
pub struct Chart {
    data: Arc<ChartData>,
    index: Arc<HashMap<String, usize>>,
    // for each variable i, the Laurent generators u with u = e^(−var_i)
    exp_links: Arc<Vec<Vec<usize>>>,
}

impl Chart {
    pub fn new(vars: Vec<Variable>) -> Result<Chart> {
        let kinds = vec![VarKind::Coordinate; vars.len()];
        Chart::with_kinds(vars, kinds)
    }

    pub fn empty() -> Chart {
        Chart::new(Vec::new()).expect("empty chart")
    }

    pub fn with_kinds(vars: Vec<Variable>, kinds: Vec<VarKind>) -> Result<Chart> {
        assert_eq!(vars.len(), kinds.len());
        let mut index = HashMap::with_capacity(vars.len());
        for (i, v) in vars.iter().enumerate() {
            if v.name.is_empty() || !v.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Shape(format!("invalid variable name `{}`", v.name)));
            }
            if !v.name.starts_with(|c: char| c.is_ascii_alphabetic()) {
                return Err(Error::Shape(format!(
                    "variable name `{}` must start with a letter",
                    v.name
                )));
            }
            if index.insert(v.name.clone(), i).is_some() {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        let mut exp_links = vec![Vec::new(); vars.len()];
        for (i, kind) in kinds.iter().enumerate() {
            if let VarKind::ExpNeg(of) = kind {
                let t = *index
                    .get(of)
                    .ok_or_else(|| Error::UnknownVariable(of.clone()))?;
                if vars[i].parity != Parity::Even || vars[t].parity != Parity::Even {
                    return Err(Error::Shape(format!(
                        "Laurent generator `{}` and its exponent `{}` must be even",
                        vars[i].name, of
                    )));
                }
                if kinds[t] != VarKind::Coordinate {
                    return Err(Error::Shape(format!("`{of}` is not a coordinate")));
                }
                exp_links[t].push(i);
            }
        }
        Ok(Chart {
            data: Arc::new(ChartData { vars, kinds }),
            index: Arc::new(index),
            exp_links: Arc::new(exp_links),
        })
    }

    pub fn len(&self) -> usize {
        self.data.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.vars.is_empty()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.data.vars
    }

    pub fn var(&self, i: usize) -> &Variable {
        &self.data.vars[i]
    }

    pub fn kind(&self, i: usize) -> &VarKind {
        &self.data.kinds[i]
    }

    pub fn kinds(&self) -> &[VarKind] {
        &self.data.kinds
    }

    pub fn is_coordinate(&self, i: usize) -> bool {
        self.data.kinds[i] == VarKind::Coordinate
    }

    pub fn is_laurent(&self, i: usize) -> bool {
        matches!(self.data.kinds[i], VarKind::ExpNeg(_))
    }

    /// Indices of the coordinates (everything except Laurent generators).
    pub fn coordinates(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.is_coordinate(i))
    }

    pub(crate) fn exp_links(&self, i: usize) -> &[usize] {
        &self.exp_links[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn same(&self, other: &Chart) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data == other.data
    }

    pub(crate) fn ensure_same(&self, other: &Chart) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    /// A new chart with the same variables and every weight negated.
    pub fn with_negated_weights(&self) -> Chart {
        let vars = self
            .vars()
            .iter()
            .map(|v| Variable::new(v.name.clone(), v.parity, -v.weight))
            .collect();
        Chart::with_kinds(vars, self.data.kinds.clone()).expect("valid chart")
    }

    /// Appends variables, keeping existing ones in place.
    pub fn extended(&self, extra: Vec<(Variable, VarKind)>) -> Result<Chart> {
        let mut vars = self.data.vars.clone();
        let mut kinds = self.data.kinds.clone();
        for (v, k) in extra {
            vars.push(v);
            kinds.push(k);
        }
        Chart::with_kinds(vars, kinds)
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Chart) -> bool {
        self.same(other)
    }
}

impl Eq for Chart {}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Chart[")?;
        for (i, v) in self.vars().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let p = if v.parity.is_odd() { "odd" } else { "even" };
            write!(f, "{}:{}:{}", v.name, p, v.weight)?;
            if let VarKind::ExpNeg(t) = self.kind(i) {
                write!(f, "=exp(-{t})")?;
            }
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates() {
        let err = Chart::new(vec![Variable::even("x", 0), Variable::odd("x", 1)]).unwrap_err();
        assert_eq!(err, Error::DuplicateVariable("x".into()));
    }

    #[test]
    fn laurent_generator_must_reference_even_coordinate() {
        let bad = Chart::with_kinds(
            vec![Variable::odd("t", 0), Variable::even("u", 0)],
            vec![VarKind::Coordinate, VarKind::ExpNeg("t".into())],
        );
        assert!(bad.is_err());
        let good = Chart::with_kinds(
            vec![Variable::even("t", 0), Variable::even("u", 0)],
            vec![VarKind::Coordinate, VarKind::ExpNeg("t".into())],
        )
        .unwrap();
        assert_eq!(good.exp_links(0), &[1]);
        assert_eq!(good.coordinates().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn charts_compare_by_content() {
        let a = Chart::new(vec![Variable::even("x", 0)]).unwrap();
        let b = Chart::new(vec![Variable::even("x", 0)]).unwrap();
        let c = Chart::new(vec![Variable::even("x", 1)]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
