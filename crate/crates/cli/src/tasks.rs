//! Task dispatch.

use clap::ValueEnum;
use quasiq::algebroids::{
    build_structure, cocycle_merge, cocycle_split, dual_schouten, flat_connection, lie_algebra_jacobi,
    odd_contact, schoutenisation_identity, schoutenise, transport, LieAlgebroidWithCocycle,
};
use quasiq::brackets::{
    check_axioms, coordinate_bracket, odd_jacobi_bracket, verify_odd_jacobi, verify_quasi_q,
    verify_schouten, LeibnizForm, QuasiQStructure,
};
use quasiq::expr::{parse_expr, render};
use quasiq::kernel::{rat, Derivation, Parity, Poly};
use quasiq::phase::{poisson, BundleSpec};
use quasiq::random;
use quasiq::report::{BracketReport, ConditionOutcome, Residual};
use quasiq::{Error, Result};
use serde_json::json;

use crate::doc::{cocycle_doc, jacobi_doc, quasi_q_doc, tables_doc, SpecDocument};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Task {
    VerifyOddJacobi,
    VerifyQuasiQ,
    VerifySchouten,
    Transport,
    Split,
    Merge,
    Schoutenise,
    DualSchouten,
    Bracket,
    Axioms,
    Example,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    OddContact,
    LieAlgebra,
    FlatConnection,
}

/// Everything a task may read besides the document.
#[derive(Clone, Debug, Default)]
pub struct Params {
    pub example: Option<Example>,
    pub dim: Option<usize>,
    pub preset: Option<String>,
    pub seed: u64,
    pub x: Option<String>,
    pub y: Option<String>,
    pub epsilon: Option<u8>,
}

pub fn name(task: Task) -> String {
    task.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn emit(doc: &SpecDocument) -> serde_json::Value {
    serde_json::to_value(doc).expect("documents serialize")
}

fn need_doc(doc: Option<&SpecDocument>) -> Result<&SpecDocument> {
    doc.ok_or_else(|| Error::Shape("this task needs --spec <file>".into()))
}

/// `Q² = 0` and `Q(φ) = 0`.
fn cocycle_report(q: &Derivation, phi: &Poly) -> Result<BracketReport> {
    let square = verify_quasi_q(&QuasiQStructure::new(q.clone(), Poly::zero(q.chart()))?)?;
    let mut report = BracketReport::new();
    let mut sq = square.entries[0].clone();
    sq.name = "Q^2 = 0".into();
    report.push(sq);
    report.push(ConditionOutcome::from_poly("Q(phi) = 0", q.apply(phi)?));
    Ok(report)
}

pub fn run(task: Task, doc: Option<&SpecDocument>, p: &Params) -> Result<Report> {
    let mut report = Report::new(&name(task));
    match task {
        Task::VerifyOddJacobi => {
            report.add(&verify_odd_jacobi(&need_doc(doc)?.jacobi()?)?);
        }
        Task::VerifyQuasiQ => {
            let doc = need_doc(doc)?;
            if doc.is_cocycle_pair() {
                let (q, phi) = doc.cocycle_pair()?;
                report.add(&cocycle_report(&q, &phi)?);
            } else {
                report.add(&verify_quasi_q(&doc.quasi_q()?)?);
            }
        }
        Task::VerifySchouten => {
            let j = need_doc(doc)?.jacobi()?;
            report.add(&verify_schouten(j.s(), j.phase())?);
        }
        Task::Transport => {
            let doc = need_doc(doc)?;
            let b = doc.bundle()?;
            let t = transport(&doc.jacobi()?, &b)?;
            report.add(&t.jacobi_report);
            report.add(&t.quasi_q_report);
            report.output = Some(emit(&SpecDocument::new(&b, quasi_q_doc(&t.quasi_q))));
        }
        Task::Split => {
            let doc = need_doc(doc)?;
            let b = doc.bundle()?;
            let qq = doc.quasi_q()?;
            let pre = verify_quasi_q(&qq)?;
            report.add(&pre);
            if pre.passed() {
                let l = cocycle_split(&qq)?;
                report.add(&cocycle_report(l.q_field(), l.phi())?);
                report.output = Some(emit(&SpecDocument::new(&b, cocycle_doc(l.q_field(), l.phi()))));
            }
        }
        Task::Merge => {
            let doc = need_doc(doc)?;
            let b = doc.bundle()?;
            let (q, phi) = doc.cocycle_pair()?;
            let pre = cocycle_report(&q, &phi)?;
            report.add(&pre);
            if pre.passed() {
                let qq = cocycle_merge(&LieAlgebroidWithCocycle::new(q, phi)?)?;
                report.add(&verify_quasi_q(&qq)?);
                report.output = Some(emit(&SpecDocument::new(&b, quasi_q_doc(&qq))));
            }
        }
        Task::Schoutenise => {
            let j = need_doc(doc)?.jacobi()?;
            report.add_outcome(&schoutenisation_identity(&j, false)?);
            let sch = schoutenise(&j)?;
            report.add(&verify_schouten(&sch.s_bar, &sch.phase)?);
            let chart: Vec<&str> = sch.phase.chart().vars().iter().map(|v| v.name.as_str()).collect();
            report.output = Some(json!({ "S_bar": render(&sch.s_bar), "chart": chart }));
        }
        Task::DualSchouten => {
            let spec = need_doc(doc)?.tables()?;
            let j = build_structure(&spec)?;
            let pre = verify_odd_jacobi(&j)?;
            report.add(&pre);
            if pre.passed() {
                let (s_bar, phi_bar) = dual_schouten(&spec)?;
                let pc = j.phase();
                report.add_outcome(&ConditionOutcome::from_poly("{Sbar,Sbar} = 0", poisson(&s_bar, &s_bar, pc)?));
                report.add_outcome(&ConditionOutcome::from_poly("{Sbar,phibar} = 0", poisson(&s_bar, &phi_bar, pc)?));
                report.output = Some(json!({ "S_bar": render(&s_bar), "phi_bar": render(&phi_bar) }));
            }
        }
        Task::Bracket => {
            let doc = need_doc(doc)?;
            let j = doc.jacobi()?;
            let task = doc.task.clone().unwrap_or_default();
            let text = |flag: &Option<String>, fallback: Option<String>, what: &str| {
                flag.clone()
                    .or(fallback)
                    .ok_or_else(|| Error::Shape(format!("bracket needs --{what}")))
            };
            let base = j.phase().base().clone();
            let x = parse_expr(&text(&p.x, task.x, "x")?, &base)?;
            let y = parse_expr(&text(&p.y, task.y, "y")?, &base)?;
            let z = odd_jacobi_bracket(&j, &x, &y)?;
            match doc.tables() {
                Ok(spec) => {
                    let c = coordinate_bracket(&spec, &x, &y)?.transfer(&base)?;
                    report.add_outcome(&ConditionOutcome::from_residual(
                        "derived = coordinate formula",
                        Residual::Poly(&z - &c),
                    ));
                }
                Err(e) => report.notes.push(format!("no coordinate formula: {e}")),
            }
            report.output = Some(json!({ "X": render(&x), "Y": render(&y), "bracket": render(&z) }));
        }
        Task::Axioms => {
            let doc = need_doc(doc)?;
            let j = doc.jacobi()?;
            let task = doc.task.clone().unwrap_or_default();
            let eps = match p.epsilon.or(task.epsilon).unwrap_or(1) {
                0 => Parity::Even,
                1 => Parity::Odd,
                other => return Err(Error::Shape(format!("epsilon must be 0 or 1, got {other}"))),
            };
            let base = j.phase().base().clone();
            let vars: Vec<usize> = base.coordinates().collect();
            let mut gens: Vec<Poly> = vars.iter().map(|&i| Poly::var_at(&base, i)).collect();
            if !vars.is_empty() {
                let mut r = random::rng(task.seed.unwrap_or(p.seed));
                gens.extend((0..3).map(|_| random::monomial(&mut r, &base, &vars, 2)));
            }
            report.add(&check_axioms(|a, b| odd_jacobi_bracket(&j, a, b), eps, &gens, LeibnizForm::Anomaly)?);
        }
        Task::Example => example(&mut report, p)?,
    }
    Ok(report)
}

fn example(report: &mut Report, p: &Params) -> Result<()> {
    let which = p
        .example
        .ok_or_else(|| Error::Shape("example needs a name: odd-contact, lie-algebra or flat-connection".into()))?;
    match which {
        Example::OddContact => {
            let oc = odd_contact(p.dim.unwrap_or(1))?;
            report.add(&oc.transport.jacobi_report);
            report.add(&oc.transport.quasi_q_report);
            report.output = Some(emit(&SpecDocument::new(&oc.bundle, jacobi_doc(&oc.jacobi))));
        }
        Example::LieAlgebra => {
            let preset = random::lie_preset(p.preset.as_deref().unwrap_or("solvable2"))?;
            let phi: Vec<_> = match preset.characters.first() {
                Some(ch) => ch.iter().map(|&v| rat(v)).collect(),
                None => vec![rat(0); preset.parities.len()],
            };
            let spec = lie_algebra_jacobi(&preset.parities, &preset.table(&rat(1)), &phi)?;
            report.add(&verify_odd_jacobi(&build_structure(&spec)?)?);
            report.output = Some(emit(&SpecDocument::new(spec.bundle(), tables_doc(&spec))));
        }
        Example::FlatConnection => {
            // 𝔸 = dx over ℝ^{1|1}
            let b = BundleSpec::new(
                vec![("x1".into(), Parity::Even), ("x2".into(), Parity::Odd)],
                vec![("1".into(), Parity::Even), ("2".into(), Parity::Odd)],
            )?;
            let base = b.base_chart()?;
            let qq = flat_connection(&b, &[Poly::one(&base), Poly::zero(&base)])?;
            report.add(&verify_quasi_q(&qq)?);
            report.output = Some(emit(&SpecDocument::new(&b, quasi_q_doc(&qq))));
        }
    }
    Ok(())
}
