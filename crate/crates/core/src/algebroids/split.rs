use crate::brackets::{verify_odd_jacobi, verify_quasi_q, QuasiQStructure};
use crate::error::{Error, Result};
use crate::kernel::{euler_field, ratio, Chart, Derivation, Poly};
use crate::phase::{poisson, BundleSpec};

use super::{build_structure, is_weight_one, pair_sign, JacobiAlgebroidSpec};

/// A homological vector field `Q` with an odd weight-one cocycle `φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebroidWithCocycle {
    q_field: Derivation,
    phi: Poly,
}

fn half_square(d: &Derivation) -> Result<Derivation> {
    Ok(d.commutator(d)?.scale(&ratio(1, 2)))
}

impl LieAlgebroidWithCocycle {
    /// Checks `Q² = 0`, `Q(φ) = 0`, `[E,Q] = Q`, `E(φ) = φ` and that `φ` is odd.
    pub fn new(q_field: Derivation, phi: Poly) -> Result<Self> {
        let phi = phi.transfer(q_field.chart())?;
        let qq = QuasiQStructure::new(q_field, phi)?;
        let (q_field, phi) = (qq.d().clone(), qq.q().clone());
        if !is_weight_one(&qq)? {
            return Err(Error::WeightMismatch {
                name: "Q, phi".into(),
                expected: 1,
                found: "not weight one under the Euler field".into(),
            });
        }
        let sq = half_square(&q_field)?;
        if !sq.is_zero() {
            return Err(Error::StructureInvalid(format!("Q^2 = {sq} is not zero")));
        }
        let qphi = q_field.apply(&phi)?;
        if !qphi.is_zero() {
            return Err(Error::StructureInvalid(format!("Q(phi) = {qphi} is not zero")));
        }
        Ok(LieAlgebroidWithCocycle { q_field, phi })
    }

    pub fn chart(&self) -> &Chart {
        self.q_field.chart()
    }

    pub fn q_field(&self) -> &Derivation {
        &self.q_field
    }

    pub fn phi(&self) -> &Poly {
        &self.phi
    }
}

/// `Q = D − qE`, `φ = q`, checking `Q² = 0` and `Q(φ) = 0` directly.
pub fn cocycle_split(qq: &QuasiQStructure) -> Result<LieAlgebroidWithCocycle> {
    if !is_weight_one(qq)? {
        return Err(Error::WeightMismatch {
            name: "D, q".into(),
            expected: 1,
            found: "not weight one under the Euler field".into(),
        });
    }
    let e = euler_field(qq.chart());
    let q_field = qq.d().try_sub(&e.left_mul(qq.q())?)?;
    // Q² = D² − qD on every function, so this fails exactly when (D, q) is not quasi Q
    LieAlgebroidWithCocycle::new(q_field, qq.q().clone())
}

/// `D = Q + φE`, `q = φ`.
pub fn cocycle_merge(l: &LieAlgebroidWithCocycle) -> Result<QuasiQStructure> {
    let e = euler_field(l.chart());
    let d = l.q_field.try_add(&e.left_mul(&l.phi)?)?;
    let qq = QuasiQStructure::new(d, l.phi.clone())?;
    let report = verify_quasi_q(&qq)?;
    if !report.passed() {
        return Err(Error::Internal(format!(
            "merged structure is not quasi Q:\n{report}"
        )));
    }
    Ok(qq)
}

/// The replacement
/// `Q_{βα}^γ − (−1)^(α̃+β̃)(δ_α^γ Q_β + (−1)^((α̃+1)(β̃+1)) Q_α δ_β^γ)`
/// applied to the structure functions, with the cocycle part removed.
pub fn replacement_rule(spec: &JacobiAlgebroidSpec) -> Result<JacobiAlgebroidSpec> {
    let b = spec.bundle();
    let r = b.rank();
    let base = spec.base_chart();
    let mut brackets = spec.bracket_table().to_vec();
    for (be, plane) in brackets.iter_mut().enumerate() {
        for (al, row) in plane.iter_mut().enumerate() {
            let (pa, pb) = (b.fibre_parity(al), b.fibre_parity(be));
            let outer = (pa + pb).sign() as i64;
            let inner = pair_sign(pa, pb) as i64;
            for (ga, entry) in row.iter_mut().enumerate() {
                let mut corr = Poly::zero(base);
                if al == ga {
                    corr += spec.cocycle(be);
                }
                if be == ga {
                    corr += &spec.cocycle(al).scale_int(inner);
                }
                *entry -= &corr.scale_int(outer);
            }
        }
    }
    JacobiAlgebroidSpec::new(
        b.clone(),
        spec.anchor_table().to_vec(),
        brackets,
        vec![Poly::zero(base); r],
    )
}

/// The Schouten structure `S̄` on T*(ΠE*) dual to the split, with the
/// cocycle `φ̄ = −π^α Q_α`:
/// `S̄ = (−1)^α̃ π^α Q_α^A p_A + ½((−1)^(α̃+β̃) π^α π^β Q_{βα}^γ + (−1)^γ̃ 2π^α Q_α π^γ) η_γ`.
pub fn dual_schouten(spec: &JacobiAlgebroidSpec) -> Result<(Poly, Poly)> {
    let j = build_structure(spec)?;
    let report = verify_odd_jacobi(&j)?;
    if !report.passed() {
        return Err(Error::StructureInvalid(format!(
            "not an odd Jacobi structure:\n{report}"
        )));
    }
    let b: &BundleSpec = spec.bundle();
    let pc = j.phase();
    let c = pc.chart();
    let r = b.rank();
    let pi = |a: usize| pc.var(&format!("p_{}", b.dual_fibre_name(a)));
    let eta = |a: usize| pc.var(&b.dual_fibre_name(a));
    let lift = |p: &Poly| p.transfer(c);
    let mut s_bar = j.s().clone();
    let mut phi_bar = Poly::zero(c);
    for a in 0..r {
        let qa = lift(spec.cocycle(a))?;
        let piq = &pi(a)? * &qa;
        phi_bar -= &piq;
        for g in 0..r {
            let sign = b.fibre_parity(g).sign() as i64;
            s_bar += &(&(&piq * &pi(g)?) * &eta(g)?).scale_int(sign);
        }
    }
    let ss = poisson(&s_bar, &s_bar, pc)?;
    let sp = poisson(&s_bar, &phi_bar, pc)?;
    if !ss.is_zero() || !sp.is_zero() {
        return Err(Error::StructureInvalid(format!(
            "dual Schouten structure fails: {{S,S}} = {ss}, {{S,phi}} = {sp}"
        )));
    }
    Ok((s_bar, phi_bar))
}
