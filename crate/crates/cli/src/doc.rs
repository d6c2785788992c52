//! The JSON spec document and its conversion to library structures.

use std::collections::BTreeMap;

use quasiq::algebroids::{build_structure, transport, transport_back, JacobiAlgebroidSpec};
use quasiq::brackets::{OddJacobiStructure, QuasiQStructure};
use quasiq::expr::{parse_expr, render};
use quasiq::kernel::{euler_field, Chart, Derivation, Parity, Poly};
use quasiq::phase::BundleSpec;
use quasiq::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityDoc {
    Even,
    Odd,
}

impl From<ParityDoc> for Parity {
    fn from(p: ParityDoc) -> Parity {
        match p {
            ParityDoc::Even => Parity::Even,
            ParityDoc::Odd => Parity::Odd,
        }
    }
}

impl From<Parity> for ParityDoc {
    fn from(p: Parity) -> ParityDoc {
        match p {
            Parity::Even => ParityDoc::Even,
            Parity::Odd => ParityDoc::Odd,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarDoc {
    pub name: String,
    pub parity: ParityDoc,
}

/// Base coordinates and fibre labels. A numeric label `i` gives the
/// coordinates `eta{i}` on ΠE* and `xi{i}` on ΠE; any other label `l`
/// gives `l` and `xi_l`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    #[serde(default)]
    pub base: Vec<VarDoc>,
    #[serde(default)]
    pub fibres: Vec<VarDoc>,
}

/// `S` and `Q` on T*(ΠE*), coordinates `(x, eta, p_x, p_eta)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacobiDoc {
    #[serde(rename = "S")]
    pub s: String,
    #[serde(rename = "Q")]
    pub q: String,
}

/// `D` (coefficient per ΠE coordinate) and `q` on ΠE, coordinates `(x, xi)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasiQDoc {
    #[serde(rename = "D")]
    pub d: BTreeMap<String, String>,
    pub q: String,
}

/// A homological vector field with a cocycle on ΠE.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleDoc {
    pub homological: BTreeMap<String, String>,
    pub phi: String,
}

/// Structure functions in the base coordinates: `anchor[α][A]`,
/// `brackets[β][α][γ]`, `cocycle[α]`. Missing tables are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TablesDoc {
    #[serde(default)]
    pub anchor: Vec<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    pub cocycle: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StructureDoc {
    Jacobi(JacobiDoc),
    QuasiQ(QuasiQDoc),
    Cocycle(CocycleDoc),
    Tables(TablesDoc),
}

impl Default for StructureDoc {
    fn default() -> Self {
        StructureDoc::Tables(TablesDoc::default())
    }
}

/// Task parameters that may be given in the document instead of flags.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub bundle: BundleDoc,
    #[serde(default)]
    pub structure: StructureDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<TaskDoc>,
}

fn vars(v: &[VarDoc]) -> Vec<(String, Parity)> {
    v.iter().map(|d| (d.name.clone(), d.parity.into())).collect()
}

fn parse_field(what: &str, text: &str, chart: &Chart) -> Result<Poly> {
    parse_expr(text, chart).map_err(|e| match e {
        Error::Syntax { pos, msg } => Error::Syntax {
            pos,
            msg: format!("{msg} (in {what})"),
        },
        other => other,
    })
}

fn parse_field_map(what: &str, map: &BTreeMap<String, String>, chart: &Chart, parity: Parity) -> Result<Derivation> {
    let mut d = Derivation::zero(chart, parity);
    for (name, text) in map {
        let i = chart.index_of(name)?;
        d.set(i, parse_field(&format!("{what}[{name}]"), text, chart)?)?;
    }
    Ok(d)
}

fn field_map(d: &Derivation) -> BTreeMap<String, String> {
    let chart = d.chart();
    (0..chart.len())
        .filter(|&i| !d.coeff(i).is_zero())
        .map(|i| (chart.var(i).name.clone(), render(d.coeff(i))))
        .collect()
}

/// `(Q + φE, φ)` without validity checks.
fn merged(q_field: &Derivation, phi: &Poly) -> Result<QuasiQStructure> {
    let e = euler_field(q_field.chart());
    QuasiQStructure::new(q_field.try_add(&e.left_mul(phi)?)?, phi.clone())
}

impl SpecDocument {
    pub fn bundle(&self) -> Result<BundleSpec> {
        BundleSpec::new(vars(&self.bundle.base), vars(&self.bundle.fibres))
    }

    pub fn new(bundle: &BundleSpec, structure: StructureDoc) -> SpecDocument {
        let doc = |v: &[(String, Parity)]| {
            v.iter()
                .map(|(name, p)| VarDoc {
                    name: name.clone(),
                    parity: (*p).into(),
                })
                .collect()
        };
        SpecDocument {
            bundle: BundleDoc {
                base: doc(&bundle.base),
                fibres: doc(&bundle.fibres),
            },
            structure,
            task: None,
        }
    }

    pub fn is_cocycle_pair(&self) -> bool {
        matches!(self.structure, StructureDoc::Cocycle(_))
    }

    /// The homological field and cocycle of a `homological`/`phi` document.
    pub fn cocycle_pair(&self) -> Result<(Derivation, Poly)> {
        let b = self.bundle()?;
        match &self.structure {
            StructureDoc::Cocycle(c) => {
                let chart = b.chart()?;
                let q = parse_field_map("homological", &c.homological, &chart, Parity::Odd)?;
                let phi = parse_field("phi", &c.phi, &chart)?;
                Ok((q, phi))
            }
            _ => Err(Error::Shape(
                "expected a structure with `homological` and `phi`".into(),
            )),
        }
    }

    pub fn tables(&self) -> Result<JacobiAlgebroidSpec> {
        let b = self.bundle()?;
        match &self.structure {
            StructureDoc::Tables(t) => {
                let base = b.base_chart()?;
                let (r, n) = (b.rank(), base.len());
                let z = Poly::zero(&base);
                let p = |what: String, s: &String| parse_field(&what, s, &base);
                let anchor = if t.anchor.is_empty() {
                    vec![vec![z.clone(); n]; r]
                } else {
                    t.anchor
                        .iter()
                        .enumerate()
                        .map(|(a, row)| row.iter().enumerate().map(|(i, s)| p(format!("anchor[{a}][{i}]"), s)).collect())
                        .collect::<Result<_>>()?
                };
                let brackets = if t.brackets.is_empty() {
                    vec![vec![vec![z.clone(); r]; r]; r]
                } else {
                    t.brackets
                        .iter()
                        .enumerate()
                        .map(|(be, m)| {
                            m.iter()
                                .enumerate()
                                .map(|(al, v)| {
                                    v.iter()
                                        .enumerate()
                                        .map(|(g, s)| p(format!("brackets[{be}][{al}][{g}]"), s))
                                        .collect()
                                })
                                .collect()
                        })
                        .collect::<Result<_>>()?
                };
                let cocycle = if t.cocycle.is_empty() {
                    vec![z; r]
                } else {
                    t.cocycle
                        .iter()
                        .enumerate()
                        .map(|(a, s)| p(format!("cocycle[{a}]"), s))
                        .collect::<Result<_>>()?
                };
                JacobiAlgebroidSpec::new(b, anchor, brackets, cocycle)
            }
            StructureDoc::Jacobi(_) => JacobiAlgebroidSpec::from_structure(&b, &self.jacobi()?),
            StructureDoc::QuasiQ(_) | StructureDoc::Cocycle(_) => {
                JacobiAlgebroidSpec::from_quasi_q(&b, &self.quasi_q()?)
            }
        }
    }

    pub fn jacobi(&self) -> Result<OddJacobiStructure> {
        let b = self.bundle()?;
        match &self.structure {
            StructureDoc::Jacobi(j) => {
                let pc = b.dual_phase()?;
                let s = parse_field("S", &j.s, pc.chart())?;
                let q = parse_field("Q", &j.q, pc.chart())?;
                OddJacobiStructure::new(&pc, s, q, false)
            }
            StructureDoc::Tables(_) => build_structure(&self.tables()?),
            StructureDoc::QuasiQ(_) | StructureDoc::Cocycle(_) => transport_back(&self.quasi_q()?, &b),
        }
    }

    pub fn quasi_q(&self) -> Result<QuasiQStructure> {
        let b = self.bundle()?;
        match &self.structure {
            StructureDoc::QuasiQ(d) => {
                let chart = b.chart()?;
                let field = parse_field_map("D", &d.d, &chart, Parity::Odd)?;
                QuasiQStructure::new(field, parse_field("q", &d.q, &chart)?)
            }
            StructureDoc::Cocycle(_) => {
                let (q, phi) = self.cocycle_pair()?;
                merged(&q, &phi)
            }
            StructureDoc::Tables(_) => self.tables()?.quasi_q(),
            StructureDoc::Jacobi(_) => Ok(transport(&self.jacobi()?, &b)?.quasi_q),
        }
    }
}

pub fn jacobi_doc(j: &OddJacobiStructure) -> StructureDoc {
    StructureDoc::Jacobi(JacobiDoc {
        s: render(j.s()),
        q: render(j.q()),
    })
}

pub fn quasi_q_doc(qq: &QuasiQStructure) -> StructureDoc {
    StructureDoc::QuasiQ(QuasiQDoc {
        d: field_map(qq.d()),
        q: render(qq.q()),
    })
}

pub fn cocycle_doc(q: &Derivation, phi: &Poly) -> StructureDoc {
    StructureDoc::Cocycle(CocycleDoc {
        homological: field_map(q),
        phi: render(phi),
    })
}

pub fn tables_doc(spec: &JacobiAlgebroidSpec) -> StructureDoc {
    let r = |p: &Poly| render(p);
    StructureDoc::Tables(TablesDoc {
        anchor: spec.anchor_table().iter().map(|row| row.iter().map(r).collect()).collect(),
        brackets: spec
            .bracket_table()
            .iter()
            .map(|m| m.iter().map(|v| v.iter().map(r).collect()).collect())
            .collect(),
        cocycle: spec.cocycle_table().iter().map(r).collect(),
    })
}
