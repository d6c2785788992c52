use crate::brackets::{verify_odd_jacobi, OddJacobiStructure, QuasiQStructure};
use crate::error::{Error, Result};
use crate::expr::parse_expr;
use crate::kernel::{euler_field, Chart, Derivation, Parity, Poly, Rational, VarKind, Variable};
use crate::phase::{cotangent, poisson, BundleSpec, PhaseChart};
use crate::report::ConditionOutcome;

use super::{transport, JacobiAlgebroidSpec, Transport};

/// `S̄ = u(S − 𝒬 p_t)` on the cotangent chart of the base extended by `t`,
/// with `u = e^(−t)`.
#[derive(Clone, Debug)]
pub struct Schoutenised {
    pub phase: PhaseChart,
    pub s_bar: Poly,
}

/// Name of the extra even coordinate, its momentum and `e^(−t)`.
pub const TIME: &str = "t";
pub const EXP_NEG_TIME: &str = "u";

fn extended_phase(pc: &PhaseChart) -> Result<PhaseChart> {
    let base = pc.base().extended(vec![
        (Variable::even(TIME, 0), VarKind::Coordinate),
        (Variable::even(EXP_NEG_TIME, 0), VarKind::ExpNeg(TIME.into())),
    ])?;
    cotangent(&base)
}

pub fn schoutenise(j: &OddJacobiStructure) -> Result<Schoutenised> {
    let phase = extended_phase(j.phase())?;
    let c = phase.chart();
    let s = j.s().transfer(c)?;
    let q = j.q().transfer(c)?;
    let p = phase.var(&format!("p_{TIME}"))?;
    let u = phase.var(EXP_NEG_TIME)?;
    let s_bar = &u * &(&s - &(&q * &p));
    Ok(Schoutenised { phase, s_bar })
}

/// `{S̄,S̄} − u²({S,S} + 2𝒬S − 2p{S,𝒬} + p²{𝒬,𝒬})`, which vanishes for every
/// pair of odd functions; the last term is zero for linear-form structures.
pub fn schoutenisation_identity(j: &OddJacobiStructure, with_qq_term: bool) -> Result<ConditionOutcome> {
    let sch = schoutenise(j)?;
    let pc = j.phase();
    let c = sch.phase.chart();
    let lift = |f: Poly| f.transfer(c);
    let (s, q) = (j.s(), j.q());
    let p = sch.phase.var(&format!("p_{TIME}"))?;
    let u = sch.phase.var(EXP_NEG_TIME)?;
    let lhs = poisson(&sch.s_bar, &sch.s_bar, &sch.phase)?;
    let mut inner = lift(poisson(s, s, pc)?)?;
    inner += &lift((q * s).scale_int(2))?;
    inner -= &(&p * &lift(poisson(s, q, pc)?)?).scale_int(2);
    if with_qq_term {
        inner += &(&p.pow(2) * &lift(poisson(q, q, pc)?)?);
    }
    let rhs = &u.pow(2) * &inner;
    Ok(ConditionOutcome::from_poly(
        "{Sbar,Sbar} = u^2({S,S} + 2QS - 2p{S,Q})",
        &lhs - &rhs,
    ))
}

/// A Lie (super)algebra with structure constants `C_{βα}^γ`, encoded by
/// `Q = ½ξ^αξ^β C_{βα}^γ ∂/∂ξ^γ` on Πg, and a cocycle `φ = (−1)^α̃ ξ^α φ_α`,
/// turned into the Jacobi structure of `(Q + φE, φ)` on Πg*. Validity is
/// reported by the verifiers, not assumed.
pub fn lie_algebra_jacobi(
    parities: &[Parity],
    constants: &[Vec<Vec<Rational>>],
    phi: &[Rational],
) -> Result<JacobiAlgebroidSpec> {
    let bundle = BundleSpec::standard(&[], parities);
    let base = bundle.base_chart()?;
    let r = parities.len();
    let c = |v: &Rational| Poly::constant(&base, v.clone());
    if constants.len() != r || phi.len() != r {
        return Err(Error::Shape(format!("expected rank {r} constants and cocycle")));
    }
    let lie = JacobiAlgebroidSpec::new(
        bundle.clone(),
        vec![Vec::new(); r],
        constants
            .iter()
            .map(|m| m.iter().map(|v| v.iter().map(c).collect()).collect())
            .collect(),
        vec![Poly::zero(&base); r],
    )?;
    let q_field = lie.quasi_q()?.d().clone();
    let chart = q_field.chart().clone();
    let mut phi_poly = Poly::zero(&chart);
    for (a, v) in phi.iter().enumerate() {
        let xi = Poly::var(&chart, &bundle.fibre_name(a))?;
        phi_poly += &xi.scale(v).scale_int(parities[a].sign() as i64);
    }
    let e = euler_field(&chart);
    let d = q_field.try_add(&e.left_mul(&phi_poly)?)?;
    let qq = QuasiQStructure::new(d, phi_poly)?;
    JacobiAlgebroidSpec::from_quasi_q(&bundle, &qq)
}

/// The fibre label added by [`extend_r01`].
pub const R01_LABEL: &str = "tau";

/// Extends the fibres of a Lie algebroid by one even section `τ` and returns
/// `S + p_τ π^α η_α`, `𝒬 = −p_τ` as a spec on the extended bundle.
pub fn extend_r01(lie: &JacobiAlgebroidSpec) -> Result<JacobiAlgebroidSpec> {
    if lie.cocycle_table().iter().any(|c| !c.is_zero()) {
        return Err(Error::StructureInvalid(
            "extension needs a Lie algebroid (zero cocycle part)".into(),
        ));
    }
    let j = super::build_structure(lie)?;
    let report = verify_odd_jacobi(&j)?;
    if !report.passed() {
        return Err(Error::StructureInvalid(format!("not a Lie algebroid:\n{report}")));
    }
    let b = lie.bundle();
    let mut fibres = b.fibres.clone();
    fibres.push((R01_LABEL.into(), Parity::Even));
    let ext = BundleSpec::new(b.base.clone(), fibres)?;
    let pc = ext.dual_phase()?;
    let c = pc.chart();
    let p_tau = pc.var(&format!("p_{R01_LABEL}"))?;
    let mut s = j.s().transfer(c)?;
    for a in 0..b.rank() {
        let pi = pc.var(&format!("p_{}", b.dual_fibre_name(a)))?;
        let eta = pc.var(&b.dual_fibre_name(a))?;
        s += &(&(&p_tau * &pi) * &eta);
    }
    let ext_j = OddJacobiStructure::new(&pc, s, -&p_tau, true)?;
    JacobiAlgebroidSpec::from_structure(&ext, &ext_j)
}

/// `D = d + 𝔸E`, `q = 𝔸 = ξ^B 𝔸_B` on ΠTM presented as the ΠE chart of a
/// bundle whose fibres mirror the base (`ξ^A` plays `dx^A`).
pub fn flat_connection(bundle: &BundleSpec, a: &[Poly]) -> Result<QuasiQStructure> {
    let n = bundle.base.len();
    if bundle.rank() != n
        || bundle
            .base
            .iter()
            .zip(&bundle.fibres)
            .any(|((_, p), (_, q))| p != q)
    {
        return Err(Error::Shape("flat connection needs the tangent bundle frame".into()));
    }
    if a.len() != n {
        return Err(Error::Shape(format!("connection must have {n} components")));
    }
    let chart = bundle.chart()?;
    let mut d = Derivation::zero(&chart, Parity::Odd);
    let mut form = Poly::zero(&chart);
    for i in 0..n {
        let dx = Poly::var_at(&chart, n + i);
        d.set(i, dx.clone())?;
        form += &(&dx * &a[i].transfer(&chart)?);
    }
    if !form.parity_of().admits(Parity::Odd) {
        return Err(Error::ParityMismatch {
            name: "connection form".into(),
            expected: Parity::Odd,
            found: form.parity_of().to_string(),
        });
    }
    let e = euler_field(&chart);
    let d = d.try_add(&e.left_mul(&form)?)?;
    QuasiQStructure::new(d, form)
}

/// [`flat_connection`] over `base` on the chart `(x, dx)` with `w(dx) = 1`.
pub fn flat_connection_quasi_q(base: &Chart, a: &[Poly]) -> Result<QuasiQStructure> {
    let bundle = tangent_bundle(base)?;
    let qq = flat_connection(&bundle, a)?;
    let mut vars: Vec<Variable> = base.vars().to_vec();
    for v in base.vars() {
        vars.push(Variable::new(format!("d{}", v.name), v.parity.flip(), 1));
    }
    let target = Chart::new(vars)?;
    let n = base.len();
    // the two charts agree position by position
    let rename = |p: &Poly| -> Result<Poly> {
        let mut out = Poly::zero(&target);
        for (m, c) in p.terms() {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e != 0 {
                    t = &t * &Poly::var_at(&target, i).pow(e as u32);
                }
            }
            out += &t;
        }
        Ok(out)
    };
    let mut d = Derivation::zero(&target, Parity::Odd);
    for i in 0..2 * n {
        d.set(i, rename(qq.d().coeff(i))?)?;
    }
    QuasiQStructure::new(d, rename(qq.q())?)
}

fn tangent_bundle(base: &Chart) -> Result<BundleSpec> {
    let vars: Vec<(String, Parity)> = base.vars().iter().map(|v| (v.name.clone(), v.parity)).collect();
    let fibres = (0..vars.len())
        .map(|i| ((i + 1).to_string(), vars[i].1))
        .collect();
    BundleSpec::new(vars, fibres)
}

/// The odd contact example over an `n`-dimensional base.
#[derive(Clone, Debug)]
pub struct OddContact {
    pub bundle: BundleSpec,
    pub jacobi: OddJacobiStructure,
    pub transport: Transport,
}

/// `S = p_eta_a(p_x_a + eta_a p_tau)`, `𝒬 = −p_tau` on ΠT*N ⊗ ℝ^{0|1},
/// together with its transport to ΠTN ⊗ ℝ^{0|1}.
pub fn odd_contact(n: usize) -> Result<OddContact> {
    if n == 0 {
        return Err(Error::Shape("odd contact example needs n >= 1".into()));
    }
    let bundle = odd_contact_bundle(n)?;
    let pc = bundle.dual_phase()?;
    let terms: Vec<String> = (1..=n)
        .map(|a| format!("p_eta{a}*(p_x{a} + eta{a}*p_{R01_LABEL})"))
        .collect();
    let s = parse_expr(&terms.join(" + "), pc.chart())?;
    let q = parse_expr(&format!("-p_{R01_LABEL}"), pc.chart())?;
    let jacobi = OddJacobiStructure::new(&pc, s, q, true)?;
    let transport = transport(&jacobi, &bundle)?;
    Ok(OddContact {
        bundle,
        jacobi,
        transport,
    })
}

/// Base `x1..xn` (even) with fibres `1..n` and `tau`, all even sections.
pub fn odd_contact_bundle(n: usize) -> Result<BundleSpec> {
    let base = (1..=n).map(|a| (format!("x{a}"), Parity::Even)).collect();
    let mut fibres: Vec<(String, Parity)> = (1..=n).map(|a| (a.to_string(), Parity::Even)).collect();
    fibres.push((R01_LABEL.into(), Parity::Even));
    BundleSpec::new(base, fibres)
}
