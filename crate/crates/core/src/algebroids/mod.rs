//! Jacobi algebroids in coordinates. Structure functions define an odd Jacobi
//! structure on T*(ΠE*), which transports to a quasi Q structure on ΠE.

mod families;
mod split;

pub use families::{
    extend_r01, flat_connection, flat_connection_quasi_q, lie_algebra_jacobi, odd_contact,
    odd_contact_bundle, schoutenisation_identity, schoutenise, OddContact, Schoutenised,
    EXP_NEG_TIME, R01_LABEL, TIME,
};
pub use split::{
    cocycle_merge, cocycle_split, dual_schouten, replacement_rule, LieAlgebroidWithCocycle,
};

use crate::brackets::{verify_odd_jacobi, verify_quasi_q, OddJacobiStructure, QuasiQStructure};
use crate::error::{Error, Result};
use crate::kernel::{euler_field, ratio, Chart, Derivation, Parity, Poly};
use crate::phase::{desymbol, dvb_morphism, dvb_morphism_inverse, symbol, BundleSpec};
use crate::report::BracketReport;

/// Structure functions of an odd Jacobi structure in linear
/// anchor/bracket/cocycle form: anchor `Q_α^A`,
/// structure functions `Q_{βα}^γ` and cocycle part `Q_α`, all polynomials in
/// the base coordinates. Equality compares the structure, not the notes.
#[derive(Clone, Debug)]
pub struct JacobiAlgebroidSpec {
    bundle: BundleSpec,
    base: Chart,
    // anchor[α][A]
    anchor: Vec<Vec<Poly>>,
    // brackets[β][α][γ] = Q_{βα}^γ
    brackets: Vec<Vec<Vec<Poly>>>,
    cocycle: Vec<Poly>,
    notes: Vec<String>,
}

impl PartialEq for JacobiAlgebroidSpec {
    fn eq(&self, other: &Self) -> bool {
        self.bundle == other.bundle
            && self.anchor == other.anchor
            && self.brackets == other.brackets
            && self.cocycle == other.cocycle
    }
}

impl Eq for JacobiAlgebroidSpec {}

/// `(−1)^((α̃+1)(β̃+1))`: the symmetry `Q_{βα} = s·Q_{αβ}` that survives in
/// `π^α π^β Q_{βα}`.
pub(crate) fn pair_sign(a: Parity, b: Parity) -> i32 {
    a.flip().koszul(b.flip())
}

fn check_parity(name: String, p: &Poly, want: Parity) -> Result<()> {
    if p.parity_of().admits(want) {
        Ok(())
    } else {
        Err(Error::ParityMismatch {
            name,
            expected: want,
            found: p.parity_of().to_string(),
        })
    }
}

impl JacobiAlgebroidSpec {
    /// Validates shapes and parities and projects `Q_{βα}^γ` onto its
    /// observable graded-symmetric part.
    pub fn new(
        bundle: BundleSpec,
        anchor: Vec<Vec<Poly>>,
        brackets: Vec<Vec<Vec<Poly>>>,
        cocycle: Vec<Poly>,
    ) -> Result<Self> {
        let base = bundle.base_chart()?;
        let r = bundle.rank();
        let n = base.len();
        if anchor.len() != r || anchor.iter().any(|row| row.len() != n) {
            return Err(Error::Shape(format!("anchor must be {r}x{n}")));
        }
        if brackets.len() != r
            || brackets
                .iter()
                .any(|m| m.len() != r || m.iter().any(|v| v.len() != r))
        {
            return Err(Error::Shape(format!("structure functions must be {r}x{r}x{r}")));
        }
        if cocycle.len() != r {
            return Err(Error::Shape(format!("cocycle must have {r} entries")));
        }
        let tr = |p: &Poly| p.transfer(&base);
        let anchor: Vec<Vec<Poly>> = anchor
            .iter()
            .map(|row| row.iter().map(tr).collect())
            .collect::<Result<_>>()?;
        let raw: Vec<Vec<Vec<Poly>>> = brackets
            .iter()
            .map(|m| m.iter().map(|v| v.iter().map(tr).collect()).collect())
            .collect::<Result<_>>()?;
        let cocycle: Vec<Poly> = cocycle.iter().map(tr).collect::<Result<_>>()?;
        let fp = |a: usize| bundle.fibre_parity(a);
        for a in 0..r {
            for (ai, (name, pa)) in bundle.base.iter().enumerate() {
                check_parity(format!("anchor[{a}][{name}]"), &anchor[a][ai], fp(a) + *pa)?;
            }
            check_parity(format!("cocycle[{a}]"), &cocycle[a], fp(a))?;
            for b in 0..r {
                for g in 0..r {
                    check_parity(
                        format!("bracket[{b}][{a}][{g}]"),
                        &raw[b][a][g],
                        fp(a) + fp(b) + fp(g),
                    )?;
                }
            }
        }
        let half = ratio(1, 2);
        let mut projected = raw.clone();
        let mut changed = false;
        for b in 0..r {
            for a in 0..r {
                let s = pair_sign(fp(a), fp(b)) as i64;
                for g in 0..r {
                    let p = (&raw[b][a][g] + &raw[a][b][g].scale_int(s)).scale(&half);
                    changed |= p != raw[b][a][g];
                    projected[b][a][g] = p;
                }
            }
        }
        let mut notes = Vec::new();
        if changed {
            notes.push("structure functions projected onto their graded-symmetric part".into());
        }
        Ok(JacobiAlgebroidSpec {
            bundle,
            base,
            anchor,
            brackets: projected,
            cocycle,
            notes,
        })
    }

    pub fn zero(bundle: BundleSpec) -> Result<Self> {
        let base = bundle.base_chart()?;
        let r = bundle.rank();
        let z = Poly::zero(&base);
        JacobiAlgebroidSpec::new(
            bundle.clone(),
            vec![vec![z.clone(); base.len()]; r],
            vec![vec![vec![z.clone(); r]; r]; r],
            vec![z; r],
        )
    }

    pub fn bundle(&self) -> &BundleSpec {
        &self.bundle
    }

    pub fn base_chart(&self) -> &Chart {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.bundle.rank()
    }

    /// `Q_α^A`.
    pub fn anchor(&self, alpha: usize, a: usize) -> &Poly {
        &self.anchor[alpha][a]
    }

    /// `Q_{βα}^γ`.
    pub fn bracket(&self, beta: usize, alpha: usize, gamma: usize) -> &Poly {
        &self.brackets[beta][alpha][gamma]
    }

    /// `Q_α`.
    pub fn cocycle(&self, alpha: usize) -> &Poly {
        &self.cocycle[alpha]
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn anchor_table(&self) -> &[Vec<Poly>] {
        &self.anchor
    }

    pub fn bracket_table(&self) -> &[Vec<Vec<Poly>>] {
        &self.brackets
    }

    pub fn cocycle_table(&self) -> &[Poly] {
        &self.cocycle
    }

    /// The same spec with another cocycle part.
    pub fn with_cocycle(&self, cocycle: Vec<Poly>) -> Result<Self> {
        JacobiAlgebroidSpec::new(
            self.bundle.clone(),
            self.anchor.clone(),
            self.brackets.clone(),
            cocycle,
        )
    }

    /// Reads the structure functions back from a pair in linear form; any
    /// other shape is rejected.
    pub fn from_structure(bundle: &BundleSpec, j: &OddJacobiStructure) -> Result<Self> {
        let pc = bundle.dual_phase()?;
        let s = j.s().transfer(pc.chart())?;
        let q = j.q().transfer(pc.chart())?;
        let base = bundle.base_chart()?;
        let r = bundle.rank();
        let n = base.len();
        let idx = |name: String| pc.chart().index_of(&name);
        let pi = |a: usize| idx(format!("p_{}", bundle.dual_fibre_name(a)));
        let eta = |a: usize| idx(bundle.dual_fibre_name(a));
        let shape = |what: &str, p: Poly| -> Result<Poly> {
            p.transfer(&base).map_err(|_| {
                Error::Shape(format!("{what} is not a function of the base coordinates"))
            })
        };
        let mut anchor = vec![vec![Poly::zero(&base); n]; r];
        let mut brackets = vec![vec![vec![Poly::zero(&base); r]; r]; r];
        let mut cocycle = vec![Poly::zero(&base); r];
        for a in 0..r {
            let sign = bundle.fibre_parity(a).sign() as i64;
            let ds = s.partial_at(pi(a)?);
            for (ai, (name, _)) in bundle.base.iter().enumerate() {
                let c = ds.partial_right_at(idx(format!("p_{name}"))?).scale_int(sign);
                anchor[a][ai] = shape("anchor", c)?;
            }
            cocycle[a] = shape("cocycle", q.partial_at(pi(a)?))?;
            for b in 0..r {
                let dd = ds.partial_at(pi(b)?);
                let sign = (bundle.fibre_parity(a) + bundle.fibre_parity(b)).sign() as i64;
                for g in 0..r {
                    let c = dd.partial_right_at(eta(g)?).scale_int(sign);
                    brackets[b][a][g] = shape("structure function", c)?;
                }
            }
        }
        let spec = JacobiAlgebroidSpec::new(bundle.clone(), anchor, brackets, cocycle)?;
        let rebuilt = build_structure(&spec)?;
        if rebuilt.s() != &s || rebuilt.q() != &q {
            return Err(Error::Shape(
                "structure is not of the linear anchor/bracket/cocycle form".into(),
            ));
        }
        Ok(spec)
    }

    /// Reads the structure functions back from `D = ξ^α Q_α^A ∂_A + ½ξ^αξ^β
    /// Q_{βα}^γ ∂_γ` and `q = −(−1)^α̃ ξ^α Q_α`; any other shape is rejected.
    pub fn from_quasi_q(bundle: &BundleSpec, qq: &QuasiQStructure) -> Result<Self> {
        let chart = bundle.chart()?;
        let d = qq.d().transfer(&chart)?;
        let q = qq.q().transfer(&chart)?;
        let base = bundle.base_chart()?;
        let r = bundle.rank();
        let n = base.len();
        let xi = |a: usize| n + a;
        let shape = |what: &str, p: Poly| -> Result<Poly> {
            p.transfer(&base).map_err(|_| {
                Error::Shape(format!("{what} is not a function of the base coordinates"))
            })
        };
        let mut anchor = vec![vec![Poly::zero(&base); n]; r];
        let mut brackets = vec![vec![vec![Poly::zero(&base); r]; r]; r];
        let mut cocycle = vec![Poly::zero(&base); r];
        for a in 0..r {
            for (ai, row) in anchor[a].iter_mut().enumerate() {
                *row = shape("anchor", d.coeff(ai).partial_at(xi(a)))?;
            }
            let sign = -(bundle.fibre_parity(a).sign() as i64);
            cocycle[a] = shape("cocycle", q.partial_at(xi(a)).scale_int(sign))?;
            for b in 0..r {
                for g in 0..r {
                    let c = d.coeff(xi(g)).partial_at(xi(a)).partial_at(xi(b));
                    brackets[b][a][g] = shape("structure function", c)?;
                }
            }
        }
        let spec = JacobiAlgebroidSpec::new(bundle.clone(), anchor, brackets, cocycle)?;
        let rebuilt = spec.quasi_q()?;
        if rebuilt.d() != &d || rebuilt.q() != &q {
            return Err(Error::Shape(
                "quasi Q structure is not of the linear anchor/bracket/cocycle form".into(),
            ));
        }
        Ok(spec)
    }

    /// `D` and `q` written directly from the structure functions.
    pub fn quasi_q(&self) -> Result<QuasiQStructure> {
        let b = &self.bundle;
        let chart = b.chart()?;
        let n = self.base.len();
        let r = self.rank();
        let xi = |a: usize| Poly::var_at(&chart, n + a);
        let lift = |p: &Poly| p.transfer(&chart);
        let half = ratio(1, 2);
        let mut d = Derivation::zero(&chart, Parity::Odd);
        for ai in 0..n {
            let mut c = Poly::zero(&chart);
            for a in 0..r {
                c += &(&xi(a) * &lift(&self.anchor[a][ai])?);
            }
            d.set(ai, c)?;
        }
        for g in 0..r {
            let mut c = Poly::zero(&chart);
            for a in 0..r {
                for bb in 0..r {
                    c += &(&(&xi(a) * &xi(bb)) * &lift(&self.brackets[bb][a][g])?);
                }
            }
            d.set(n + g, c.scale(&half))?;
        }
        let mut q = Poly::zero(&chart);
        for a in 0..r {
            let t = &xi(a) * &lift(&self.cocycle[a])?;
            q -= &t.scale_int(b.fibre_parity(a).sign() as i64);
        }
        QuasiQStructure::new(d, q)
    }
}

/// `S = (−1)^α̃ π^α Q_α^A p_A + (−1)^(α̃+β̃) ½ π^α π^β Q_{βα}^γ η_γ` and
/// `𝒬 = π^α Q_α`. Validity is not implied.
pub fn build_structure(spec: &JacobiAlgebroidSpec) -> Result<OddJacobiStructure> {
    let b = &spec.bundle;
    let pc = b.dual_phase()?;
    let c = pc.chart();
    let lift = |p: &Poly| p.transfer(c);
    let r = b.rank();
    let pi = |a: usize| pc.var(&format!("p_{}", b.dual_fibre_name(a)));
    let eta = |a: usize| pc.var(&b.dual_fibre_name(a));
    let half = ratio(1, 2);
    let mut s = Poly::zero(c);
    let mut q = Poly::zero(c);
    for a in 0..r {
        let pa = b.fibre_parity(a);
        for (ai, (name, _)) in b.base.iter().enumerate() {
            let coeff = &spec.anchor[a][ai];
            if coeff.is_zero() {
                continue;
            }
            let t = &(&pi(a)? * &lift(coeff)?) * &pc.var(&format!("p_{name}"))?;
            s += &t.scale_int(pa.sign() as i64);
        }
        for bb in 0..r {
            let sign = (pa + b.fibre_parity(bb)).sign() as i64;
            let pp = &pi(a)? * &pi(bb)?;
            for g in 0..r {
                let coeff = &spec.brackets[bb][a][g];
                if coeff.is_zero() {
                    continue;
                }
                let t = &(&pp * &lift(coeff)?) * &eta(g)?;
                s += &t.scale(&half).scale_int(sign);
            }
        }
        q += &(&pi(a)? * &lift(&spec.cocycle[a])?);
    }
    OddJacobiStructure::new(&pc, s, q, true)
}

/// `D` and `q` transported from an odd Jacobi structure, with both verdicts
/// of the equivalence.
#[derive(Clone, Debug)]
pub struct Transport {
    pub quasi_q: QuasiQStructure,
    pub jacobi_report: BracketReport,
    pub quasi_q_report: BracketReport,
}

/// Pulls `(S, 𝒬)` back along `R⁻¹`, then undoes the symbol: `D` from `Ŝ`
/// and `q = −𝒬̂`. Both verifications are run and must agree.
pub fn transport(j: &OddJacobiStructure, b: &BundleSpec) -> Result<Transport> {
    let dual = b.dual_phase()?;
    let side = b.phase()?;
    let rinv = dvb_morphism_inverse(b)?;
    let s = j.s().transfer(dual.chart())?;
    let q = j.q().transfer(dual.chart())?;
    let s_hat = rinv.apply(&s)?;
    let q_hat = rinv.apply(&q)?;
    if side.momentum_degree(&s_hat) > 1 {
        return Err(Error::Shape(format!(
            "transported S is not linear in momenta: {s_hat}"
        )));
    }
    if !side.is_momentum_free(&q_hat) {
        return Err(Error::Shape(format!(
            "transported Q depends on momenta: {q_hat}"
        )));
    }
    let (d, free) = desymbol(&s_hat, &side)?;
    if !free.is_zero() {
        return Err(Error::Shape(format!(
            "transported S has a momentum-free part: {}",
            -&free
        )));
    }
    let chart = b.chart()?;
    let d = d.transfer(&chart)?;
    let qq = QuasiQStructure::new(d, -&q_hat.transfer(&chart)?)?;
    let jacobi_report = verify_odd_jacobi(j)?;
    let quasi_q_report = verify_quasi_q(&qq)?;
    if jacobi_report.passed() != quasi_q_report.passed() {
        return Err(Error::Internal(format!(
            "odd Jacobi verdict {} disagrees with quasi Q verdict {}",
            jacobi_report.passed(),
            quasi_q_report.passed()
        )));
    }
    Ok(Transport {
        quasi_q: qq,
        jacobi_report,
        quasi_q_report,
    })
}

/// The inverse of [`transport`]: symbol of `(D, q)` pulled back along `R`.
pub fn transport_back(qq: &QuasiQStructure, b: &BundleSpec) -> Result<OddJacobiStructure> {
    let dual = b.dual_phase()?;
    let side = b.phase()?;
    let f = symbol(qq.d(), qq.q(), &side)?;
    let s_hat = f.filter_terms(|m| m.exps().iter().enumerate().any(|(i, &e)| e != 0 && side.is_momentum(i)));
    let q_hat = &f - &s_hat;
    let r = dvb_morphism(b)?;
    OddJacobiStructure::new(&dual, r.apply(&s_hat)?, r.apply(&q_hat)?, false)
}

/// Whether `(D, q)` has weight one for `w̄`: `[E,D] = D` and `E(q) = q`.
pub fn is_weight_one(qq: &QuasiQStructure) -> Result<bool> {
    let e = euler_field(qq.chart());
    Ok(e.commutator(qq.d())? == *qq.d() && e.apply(qq.q())? == *qq.q())
}
