//! Cotangent charts with their canonical bracket, the symbol map, and the maps
//! between T*(ΠE*) and T*(ΠE).

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::kernel::{Chart, Derivation, Parity, Poly, Substitution, VarKind, Variable};
use crate::report::{ConditionOutcome, Residual};

/// Prefix of a conjugate momentum name.
pub const MOMENTUM_PREFIX: &str = "p_";

/// A cotangent chart: a base chart doubled by conjugate momenta of the same
/// parity and opposite weight. Laurent generators of the base are carried
/// along unpaired.
#[derive(Clone, PartialEq, Eq)]
pub struct PhaseChart {
    chart: Chart,
    base: Chart,
    // (coordinate index, momentum index) in `chart`
    pairs: Vec<(usize, usize)>,
    momentum: Vec<bool>,
}

impl PhaseChart {
    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn base(&self) -> &Chart {
        &self.base
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn is_momentum(&self, i: usize) -> bool {
        self.momentum[i]
    }

    /// Index of the momentum conjugate to the base variable `name`.
    pub fn momentum_of(&self, name: &str) -> Result<usize> {
        let i = self.chart.index_of(name)?;
        self.pairs
            .iter()
            .find(|(c, _)| *c == i)
            .map(|(_, p)| *p)
            .ok_or_else(|| Error::UnknownVariable(format!("{MOMENTUM_PREFIX}{name}")))
    }

    pub fn var(&self, name: &str) -> Result<Poly> {
        Poly::var(&self.chart, name)
    }

    /// Highest number of momentum factors in any term.
    pub fn momentum_degree(&self, f: &Poly) -> i64 {
        f.degree_in(|i| self.momentum[i])
    }

    pub fn is_momentum_free(&self, f: &Poly) -> bool {
        !f.terms().any(|(m, _)| {
            m.exps()
                .iter()
                .enumerate()
                .any(|(i, &e)| e != 0 && self.momentum[i])
        })
    }

    /// The same phase chart with every weight negated.
    pub fn with_negated_weights(&self) -> PhaseChart {
        PhaseChart {
            chart: self.chart.with_negated_weights(),
            base: self.base.with_negated_weights(),
            pairs: self.pairs.clone(),
            momentum: self.momentum.clone(),
        }
    }

    /// Lifts a function on the base chart into the phase chart.
    pub fn lift(&self, f: &Poly) -> Result<Poly> {
        f.transfer(&self.chart)
    }
}

impl fmt::Debug for PhaseChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PhaseChart({:?})", self.chart)
    }
}

/// Doubles `base` with conjugates `p_z`: same parity, negated weight.
pub fn cotangent(base: &Chart) -> Result<PhaseChart> {
    let coords: Vec<usize> = base.coordinates().collect();
    let mut vars = Vec::new();
    let mut kinds = Vec::new();
    for &i in &coords {
        vars.push(base.var(i).clone());
        kinds.push(VarKind::Coordinate);
    }
    for &i in &coords {
        let v = base.var(i);
        vars.push(Variable::new(
            format!("{MOMENTUM_PREFIX}{}", v.name),
            v.parity,
            -v.weight,
        ));
        kinds.push(VarKind::Coordinate);
    }
    for i in 0..base.len() {
        if !base.is_coordinate(i) {
            vars.push(base.var(i).clone());
            kinds.push(base.kind(i).clone());
        }
    }
    let chart = Chart::with_kinds(vars, kinds)?;
    let n = coords.len();
    let pairs = (0..n).map(|k| (k, n + k)).collect();
    let mut momentum = vec![false; chart.len()];
    for m in momentum.iter_mut().skip(n).take(n) {
        *m = true;
    }
    Ok(PhaseChart {
        chart,
        base: base.clone(),
        pairs,
        momentum,
    })
}

fn poisson_homogeneous(f: &Poly, fp: Parity, g: &Poly, pc: &PhaseChart) -> Poly {
    let chart = &pc.chart;
    let mut out = Poly::zero(chart);
    for &(x, p) in &pc.pairs {
        let a = chart.var(x).parity;
        let df_dp = f.partial_at(p);
        if !df_dp.is_zero() {
            let dg_dx = g.partial_at(x);
            if !dg_dx.is_zero() {
                let term = &df_dp * &dg_dx;
                // (−1)^(ÃF̃ + Ã)
                if a.koszul(fp) * a.sign() < 0 {
                    out -= &term;
                } else {
                    out += &term;
                }
            }
        }
        let df_dx = f.partial_at(x);
        if !df_dx.is_zero() {
            let dg_dp = g.partial_at(p);
            if !dg_dp.is_zero() {
                let term = &df_dx * &dg_dp;
                // −(−1)^(ÃF̃)
                if a.koszul(fp) < 0 {
                    out += &term;
                } else {
                    out -= &term;
                }
            }
        }
    }
    out
}

/// Canonical Poisson bracket
/// `{F,G} = (−1)^(ÃF̃+Ã) ∂F/∂p_A ∂G/∂x^A − (−1)^(ÃF̃) ∂F/∂x^A ∂G/∂p_A`
/// with left derivatives, summed over all conjugate pairs. Inhomogeneous `F`
/// is split by parity.
pub fn poisson(f: &Poly, g: &Poly, pc: &PhaseChart) -> Result<Poly> {
    pc.chart.ensure_same(f.chart())?;
    pc.chart.ensure_same(g.chart())?;
    let mut out = Poly::zero(&pc.chart);
    for (fp, comp) in f.parity_components() {
        out += &poisson_homogeneous(&comp, fp, g, pc);
    }
    Ok(out)
}

/// `Σ c_z ∂/∂z` with auxiliary `f0` ↦ `Σ c_z p_z − f0` (momentum on the right).
/// `d` and `f0` may live on any chart whose variable names belong to the base.
pub fn symbol(d: &Derivation, f0: &Poly, pc: &PhaseChart) -> Result<Poly> {
    let mut out = -&f0.transfer(&pc.chart)?;
    let dc = d.chart();
    for i in dc.coordinates() {
        let c = d.coeff(i);
        if c.is_zero() {
            continue;
        }
        let p = pc.momentum_of(&dc.var(i).name)?;
        let c = c.transfer(&pc.chart)?;
        out += &(&c * &Poly::var_at(&pc.chart, p));
    }
    Ok(out)
}

/// Inverse of [`symbol`] on momentum-linear functions: the momentum-linear
/// part becomes a derivation on the base chart and the momentum-free part `g`
/// becomes `q = −g`.
pub fn desymbol(f: &Poly, pc: &PhaseChart) -> Result<(Derivation, Poly)> {
    pc.chart.ensure_same(f.chart())?;
    if pc.momentum_degree(f) > 1 {
        return Err(Error::Shape(format!(
            "desymbol needs an input at most linear in momenta, got {f}"
        )));
    }
    let parity = match f.parity_of() {
        crate::kernel::Degree::Exactly(p) => p,
        crate::kernel::Degree::Any => Parity::Odd,
        crate::kernel::Degree::Inhomogeneous => {
            return Err(Error::ParityMismatch {
                name: "desymbol input".into(),
                expected: Parity::Odd,
                found: "inhomogeneous".into(),
            })
        }
    };
    let free = f.filter_terms(|m| {
        !m.exps()
            .iter()
            .enumerate()
            .any(|(i, &e)| e != 0 && pc.momentum[i])
    });
    let mut d = Derivation::zero(&pc.base, parity);
    for &(x, p) in &pc.pairs {
        let c = f.partial_right_at(p);
        if c.is_zero() {
            continue;
        }
        let j = pc.base.index_of(&pc.chart.var(x).name)?;
        d.set(j, c.transfer(&pc.base)?)?;
    }
    let q = -&free.transfer(&pc.base)?;
    Ok((d, q))
}

/// A vector bundle `E → M` described by its base coordinates (weight 0) and
/// the parities of a local frame of sections.
///
/// Fibre label `k` (digits) produces the coordinates `eta<k>` on ΠE* and
/// `xi<k>` on ΠE; a non-numeric label `l` produces `l` and `xi_<l>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleSpec {
    pub base: Vec<(String, Parity)>,
    pub fibres: Vec<(String, Parity)>,
}

impl BundleSpec {
    pub fn new(base: Vec<(String, Parity)>, fibres: Vec<(String, Parity)>) -> Result<BundleSpec> {
        let b = BundleSpec { base, fibres };
        // name clashes surface here
        b.dual_chart()?;
        b.chart()?;
        Ok(b)
    }

    /// Base `x1..xn` and fibres labelled `1..r` with the given parities.
    pub fn standard(base: &[Parity], fibres: &[Parity]) -> BundleSpec {
        BundleSpec {
            base: base
                .iter()
                .enumerate()
                .map(|(i, p)| (format!("x{}", i + 1), *p))
                .collect(),
            fibres: fibres
                .iter()
                .enumerate()
                .map(|(i, p)| ((i + 1).to_string(), *p))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.fibres.len()
    }

    pub fn fibre_parity(&self, alpha: usize) -> Parity {
        self.fibres[alpha].1
    }

    pub fn dual_fibre_name(&self, alpha: usize) -> String {
        let label = &self.fibres[alpha].0;
        if label.starts_with(|c: char| c.is_ascii_digit()) {
            format!("eta{label}")
        } else {
            label.clone()
        }
    }

    pub fn fibre_name(&self, alpha: usize) -> String {
        let label = &self.fibres[alpha].0;
        if label.starts_with(|c: char| c.is_ascii_digit()) {
            format!("xi{label}")
        } else {
            format!("xi_{label}")
        }
    }

    pub fn base_chart(&self) -> Result<Chart> {
        Chart::new(
            self.base
                .iter()
                .map(|(n, p)| Variable::new(n.clone(), *p, 0))
                .collect(),
        )
    }

    /// ΠE*: `η_α` of parity `ε_α + 1` and weight +1.
    pub fn dual_chart(&self) -> Result<Chart> {
        let mut vars: Vec<Variable> = self
            .base
            .iter()
            .map(|(n, p)| Variable::new(n.clone(), *p, 0))
            .collect();
        for a in 0..self.rank() {
            vars.push(Variable::new(self.dual_fibre_name(a), self.fibre_parity(a).flip(), 1));
        }
        Chart::new(vars)
    }

    /// ΠE with the weight `w̄`: `ξ^α` of parity `ε_α + 1` and weight +1.
    pub fn chart(&self) -> Result<Chart> {
        let mut vars: Vec<Variable> = self
            .base
            .iter()
            .map(|(n, p)| Variable::new(n.clone(), *p, 0))
            .collect();
        for a in 0..self.rank() {
            vars.push(Variable::new(self.fibre_name(a), self.fibre_parity(a).flip(), 1));
        }
        Chart::new(vars)
    }

    /// T*(ΠE*) with `w(η) = 1`, `w(π) = −1`.
    pub fn dual_phase(&self) -> Result<PhaseChart> {
        cotangent(&self.dual_chart()?)
    }

    /// T*(ΠE) with `w(ξ) = −1`, `w(π_α) = +1`.
    pub fn phase(&self) -> Result<PhaseChart> {
        Ok(cotangent(&self.chart()?)?.with_negated_weights())
    }
}

/// The pullback `R*` of the canonical double vector bundle morphism
/// `T*(ΠE*) → T*(ΠE)`: fixes `x`, `p`, sends `π_α ↦ η_α` and
/// `ξ^α ↦ (−1)^(ε_α) π^α`.
pub fn dvb_morphism(b: &BundleSpec) -> Result<Substitution> {
    let dual = b.dual_phase()?;
    let side = b.phase()?;
    let mut entries = Vec::new();
    let mut names = Vec::new();
    for a in 0..b.rank() {
        let xi = b.fibre_name(a);
        let eta = b.dual_fibre_name(a);
        let pi_up = Poly::var(dual.chart(), &format!("{MOMENTUM_PREFIX}{eta}"))?;
        let pi_up = pi_up.scale_int(b.fibre_parity(a).sign() as i64);
        names.push((xi.clone(), format!("{MOMENTUM_PREFIX}{xi}")));
        entries.push((xi, pi_up));
        entries.push((
            format!("{MOMENTUM_PREFIX}{}", b.fibre_name(a)),
            Poly::var(dual.chart(), &eta)?,
        ));
    }
    Substitution::new(
        side.chart(),
        dual.chart(),
        entries.iter().map(|(n, p)| (n.as_str(), p.clone())).collect(),
        true,
    )
}

/// `(R⁻¹)*`: functions on T*(ΠE*) expressed on T*(ΠE).
pub fn dvb_morphism_inverse(b: &BundleSpec) -> Result<Substitution> {
    let dual = b.dual_phase()?;
    let side = b.phase()?;
    let mut entries = Vec::new();
    for a in 0..b.rank() {
        let xi = b.fibre_name(a);
        let eta = b.dual_fibre_name(a);
        let xi_p = Poly::var(side.chart(), &xi)?.scale_int(b.fibre_parity(a).sign() as i64);
        entries.push((format!("{MOMENTUM_PREFIX}{eta}"), xi_p));
        entries.push((eta, Poly::var(side.chart(), &format!("{MOMENTUM_PREFIX}{xi}"))?));
    }
    Substitution::new(
        dual.chart(),
        side.chart(),
        entries.iter().map(|(n, p)| (n.as_str(), p.clone())).collect(),
        true,
    )
}

/// Which side of the double vector bundle a frame change acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// T*(ΠE*) with coordinates `(x, η, p, π)`.
    Dual,
    /// T*(ΠE) with coordinates `(x, ξ, p, π)`.
    Direct,
}

/// An admissible change of base coordinates `x̄ = x̄(x)` together with its
/// polynomial inverse `x = x(x̄)`, both written on the base chart.
#[derive(Clone, Debug)]
pub struct BaseChange {
    pub forward: Vec<Poly>,
    pub inverse: Vec<Poly>,
}

/// `T` is indexed `t[β][α] = T_β^α`; entries are functions on the base chart.
pub type FrameMatrix = Vec<Vec<Poly>>;

fn check_matrix(b: &BundleSpec, m: &FrameMatrix, base: &Chart, what: &str) -> Result<()> {
    let r = b.rank();
    if m.len() != r || m.iter().any(|row| row.len() != r) {
        return Err(Error::Shape(format!("{what} must be {r}x{r}")));
    }
    for (beta, row) in m.iter().enumerate() {
        for (alpha, entry) in row.iter().enumerate() {
            base.ensure_same(entry.chart())?;
            let want = b.fibre_parity(beta) + b.fibre_parity(alpha);
            if !entry.parity_of().admits(want) {
                return Err(Error::ParityMismatch {
                    name: format!("{what}[{beta}][{alpha}]"),
                    expected: want,
                    found: entry.parity_of().to_string(),
                });
            }
        }
    }
    Ok(())
}

fn mat_mul(a: &FrameMatrix, b: &FrameMatrix, chart: &Chart) -> FrameMatrix {
    let r = a.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let mut acc = Poly::zero(chart);
                    for k in 0..r {
                        acc += &(&a[i][k] * &b[k][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn is_identity(m: &FrameMatrix) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, e)| {
            if i == j {
                e.as_constant().is_some_and(|c| c.is_one())
            } else {
                e.is_zero()
            }
        })
    })
}

/// The admissible coordinate change on T*(ΠE*) or T*(ΠE) induced by a bundle
/// automorphism: frame change `ē^α = e^β T_β^α` over an optional base change.
///
/// Returns the substitution expressing the new (barred) coordinates, which
/// keep the old names, in terms of the old ones.
pub fn frame_change(
    b: &BundleSpec,
    t: &FrameMatrix,
    t_inv: &FrameMatrix,
    base_change: Option<&BaseChange>,
    side: Side,
) -> Result<Substitution> {
    let base = b.base_chart()?;
    check_matrix(b, t, &base, "T")?;
    check_matrix(b, t_inv, &base, "T^-1")?;
    if !is_identity(&mat_mul(t, t_inv, &base)) || !is_identity(&mat_mul(t_inv, t, &base)) {
        return Err(Error::NotInverse("T·T⁻¹ ≠ 1".into()));
    }
    let n = b.base.len();
    let identity: Vec<Poly> = (0..n).map(|i| Poly::var_at(&base, i)).collect();
    let (forward, inverse) = match base_change {
        Some(bc) => (bc.forward.clone(), bc.inverse.clone()),
        None => (identity.clone(), identity.clone()),
    };
    if forward.len() != n || inverse.len() != n {
        return Err(Error::Shape(format!("base change must have {n} components")));
    }
    let fwd = Substitution::new(
        &base,
        &base,
        b.base.iter().map(|(nm, _)| nm.as_str()).zip(forward.iter().cloned()).collect(),
        true,
    )?;
    let inv = Substitution::new(
        &base,
        &base,
        b.base.iter().map(|(nm, _)| nm.as_str()).zip(inverse.iter().cloned()).collect(),
        true,
    )?;
    for (i, x) in identity.iter().enumerate() {
        if &fwd.apply(&inverse[i])? != x || &inv.apply(&forward[i])? != x {
            return Err(Error::NotInverse("base change and its inverse do not compose to the identity".into()));
        }
    }
    // jac[A][B] = ∂x^B/∂x̄^A written in the old coordinates
    let jac: Vec<Vec<Poly>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|bb| fwd.apply(&inverse[bb].partial_at(a)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let d_bar = |f: &Poly, a: usize| -> Poly {
        let mut acc = Poly::zero(&base);
        for (bb, j) in jac[a].iter().enumerate() {
            acc += &(j * &f.partial_at(bb));
        }
        acc
    };

    let pc = match side {
        Side::Dual => b.dual_phase()?,
        Side::Direct => b.phase()?,
    };
    let ch = pc.chart().clone();
    let lift = |p: &Poly| p.transfer(&ch);
    let fib = |a: usize| match side {
        Side::Dual => b.dual_fibre_name(a),
        Side::Direct => b.fibre_name(a),
    };
    let fib_var = |a: usize| Poly::var(&ch, &fib(a));
    let mom_var = |a: usize| Poly::var(&ch, &format!("{MOMENTUM_PREFIX}{}", fib(a)));
    let r = b.rank();

    let mut entries: Vec<(String, Poly)> = Vec::new();
    for (i, (name, _)) in b.base.iter().enumerate() {
        entries.push((name.clone(), lift(&forward[i])?));
    }
    for a in 0..r {
        let mut fibre = Poly::zero(&ch);
        let mut mom = Poly::zero(&ch);
        for beta in 0..r {
            match side {
                Side::Dual => {
                    // η̄_α = (T⁻¹)_α^β η_β,  π̄^α = (−1)^(α̃+β̃) π^β T_β^α
                    fibre += &(&lift(&t_inv[a][beta])? * &fib_var(beta)?);
                    let sign = (b.fibre_parity(a) + b.fibre_parity(beta)).sign() as i64;
                    mom += &(&mom_var(beta)? * &lift(&t[beta][a])?).scale_int(sign);
                }
                Side::Direct => {
                    // ξ̄^α = ξ^β T_β^α,  π̄_α = (T⁻¹)_α^β π_β
                    fibre += &(&fib_var(beta)? * &lift(&t[beta][a])?);
                    mom += &(&lift(&t_inv[a][beta])? * &mom_var(beta)?);
                }
            }
        }
        entries.push((fib(a), fibre));
        entries.push((format!("{MOMENTUM_PREFIX}{}", fib(a)), mom));
    }
    for (ai, (name, ap)) in b.base.iter().enumerate() {
        let mut p_bar = Poly::zero(&ch);
        for (bi, (bname, _)) in b.base.iter().enumerate() {
            let pb = Poly::var(&ch, &format!("{MOMENTUM_PREFIX}{bname}"))?;
            p_bar += &(&lift(&jac[ai][bi])? * &pb);
        }
        for gamma in 0..r {
            let g = b.fibre_parity(gamma);
            for delta in 0..r {
                let tdg = &t[delta][gamma];
                if tdg.is_zero() {
                    continue;
                }
                for alpha in 0..r {
                    let dt = d_bar(&t_inv[gamma][alpha], ai);
                    if dt.is_zero() {
                        continue;
                    }
                    let core = &(&lift(tdg)? * &lift(&dt)?);
                    let term = match side {
                        Side::Dual => {
                            // (−1)^(Ã(γ̃+1)+δ̃) π^δ T_δ^γ ∂(T⁻¹)_γ^α/∂x̄^A η_α
                            let s = (ap.koszul(g.flip()) * b.fibre_parity(delta).sign()) as i64;
                            (&(&mom_var(delta)? * core) * &fib_var(alpha)?).scale_int(s)
                        }
                        Side::Direct => {
                            // (−1)^(Ã(γ̃+1)) ξ^δ T_δ^γ ∂(T⁻¹)_γ^α/∂x̄^A π_α
                            let s = ap.koszul(g.flip()) as i64;
                            (&(&fib_var(delta)? * core) * &mom_var(alpha)?).scale_int(s)
                        }
                    };
                    p_bar += &term;
                }
            }
        }
        entries.push((format!("{MOMENTUM_PREFIX}{name}"), p_bar));
    }
    Substitution::new(
        &ch,
        &ch,
        entries.iter().map(|(n, p)| (n.as_str(), p.clone())).collect(),
        true,
    )
}

/// Checks that `sigma` (from functions on `domain` to functions on
/// `codomain`) intertwines the canonical brackets on every generator pair.
pub fn check_bracket_preservation(
    sigma: &Substitution,
    domain: &PhaseChart,
    codomain: &PhaseChart,
) -> Result<ConditionOutcome> {
    domain.chart.ensure_same(sigma.domain())?;
    codomain.chart.ensure_same(sigma.codomain())?;
    let gens: Vec<usize> = domain.chart.coordinates().collect();
    let mut outcome = ConditionOutcome::new("bracket preservation on generators");
    for &i in &gens {
        for &j in &gens {
            let u = Poly::var_at(&domain.chart, i);
            let v = Poly::var_at(&domain.chart, j);
            let before = sigma.apply(&poisson(&u, &v, domain)?)?;
            let after = poisson(sigma.image_at(i), sigma.image_at(j), codomain)?;
            outcome.record(
                Residual::Poly(&after - &before),
                vec![u.to_string(), v.to_string()],
            );
        }
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::kernel::Degree;

    fn mixed_phase() -> PhaseChart {
        let base = Chart::new(vec![
            Variable::even("x1", 0),
            Variable::odd("x2", 0),
        ])
        .unwrap();
        cotangent(&base).unwrap()
    }

    #[test]
    fn cotangent_conjugates() {
        let b = BundleSpec::standard(&[Parity::Even], &[Parity::Even]);
        let pc = b.dual_phase().unwrap();
        let names: Vec<_> = pc.chart().vars().iter().map(|v| v.name.clone()).collect();
        assert_eq!(names, ["x1", "eta1", "p_x1", "p_eta1"]);
        let pi = pc.chart().var(3);
        assert_eq!(pi.weight, -1);
        assert_eq!(pi.parity, Parity::Odd);
        assert!(cotangent(&Chart::empty()).unwrap().chart().is_empty());
        let t = Chart::new(vec![Variable::even("t", 0)]).unwrap();
        let tp = cotangent(&t).unwrap();
        assert_eq!(tp.chart().var(1), &Variable::even("p_t", 0));
    }

    #[test]
    fn canonical_pairs() {
        let pc = mixed_phase();
        let c = pc.chart();
        let v = |n: &str| Poly::var(c, n).unwrap();
        for (x, p) in [("x1", "p_x1"), ("x2", "p_x2")] {
            assert_eq!(poisson(&v(p), &v(x), &pc).unwrap(), Poly::one(c));
        }
        // {x, p} = −(−1)^Ã
        assert_eq!(poisson(&v("x1"), &v("p_x1"), &pc).unwrap(), Poly::int(c, -1));
        assert_eq!(poisson(&v("x2"), &v("p_x2"), &pc).unwrap(), Poly::one(c));
        assert!(poisson(&v("x1"), &v("p_x2"), &pc).unwrap().is_zero());
    }

    #[test]
    fn cocycle_generator_is_self_commuting() {
        let b = BundleSpec::standard(&[Parity::Even], &[Parity::Even, Parity::Even]);
        let pc = b.dual_phase().unwrap();
        let q = parse_expr("p_eta1*x1 - 3*p_eta2", pc.chart()).unwrap();
        assert!(poisson(&q, &q, &pc).unwrap().is_zero());
    }

    #[test]
    fn poisson_weight_is_zero() {
        let b = BundleSpec::standard(&[Parity::Even], &[Parity::Even, Parity::Odd]);
        let pc = b.dual_phase().unwrap();
        let f = parse_expr("p_eta1*p_x1*eta2", pc.chart()).unwrap();
        let g = parse_expr("eta1*x1^2", pc.chart()).unwrap();
        let h = poisson(&f, &g, &pc).unwrap();
        assert!(!h.is_zero());
        let w = f.weight_of().exact().unwrap() + g.weight_of().exact().unwrap();
        assert_eq!(h.weight_of(), Degree::Exactly(w));
    }

    #[test]
    fn symbol_round_trip() {
        let b = BundleSpec::standard(&[Parity::Even], &[Parity::Even, Parity::Odd]);
        let pc = b.phase().unwrap();
        let f = parse_expr("xi1*p_x1 + 1/2*xi1*xi2*p_xi2 + 3*xi1*x1", pc.chart()).unwrap();
        let (d, q) = desymbol(&f, &pc).unwrap();
        assert_eq!(symbol(&d, &q, &pc).unwrap(), f);
        assert_eq!(q, parse_expr("-3*xi1*x1", pc.base()).unwrap());
        let quad = parse_expr("p_x1*p_xi1", pc.chart()).unwrap();
        assert!(matches!(desymbol(&quad, &pc).unwrap_err(), Error::Shape(_)));
    }

    #[test]
    fn desymbol_reads_curving_sign() {
        // (−1)^α̃ ξ^α Q_α ↦ (0, −(−1)^α̃ ξ^α Q_α)
        let b = BundleSpec::standard(&[Parity::Even], &[Parity::Even]);
        let pc = b.phase().unwrap();
        let qhat = parse_expr("2*xi1*x1", pc.chart()).unwrap();
        let (d, q) = desymbol(&qhat, &pc).unwrap();
        assert!(d.is_zero());
        assert_eq!(q, parse_expr("-2*xi1*x1", pc.base()).unwrap());
    }

    #[test]
    fn r_on_generators() {
        let b = BundleSpec::standard(&[Parity::Even], &[Parity::Even, Parity::Odd]);
        let r = dvb_morphism(&b).unwrap();
        let dual = b.dual_phase().unwrap();
        assert_eq!(r.image("xi1").unwrap(), &parse_expr("p_eta1", dual.chart()).unwrap());
        assert_eq!(r.image("xi2").unwrap(), &parse_expr("-p_eta2", dual.chart()).unwrap());
        assert_eq!(r.image("p_xi2").unwrap(), &parse_expr("eta2", dual.chart()).unwrap());
        assert_eq!(r.image("p_x1").unwrap(), &parse_expr("p_x1", dual.chart()).unwrap());
        let rinv = dvb_morphism_inverse(&b).unwrap();
        let round = r.then(&rinv).unwrap();
        let side = b.phase().unwrap();
        for i in 0..side.chart().len() {
            assert_eq!(round.image_at(i), &Poly::var_at(side.chart(), i));
        }
    }

    #[test]
    fn rank_zero_r_is_identity() {
        let b = BundleSpec::standard(&[Parity::Even], &[]);
        let r = dvb_morphism(&b).unwrap();
        let dual = b.dual_phase().unwrap();
        assert_eq!(r.image("x1").unwrap(), &Poly::var(dual.chart(), "x1").unwrap());
        assert_eq!(r.image("p_x1").unwrap(), &Poly::var(dual.chart(), "p_x1").unwrap());
    }

    #[test]
    fn frame_change_constant_diagonal() {
        let b = BundleSpec::standard(&[Parity::Even], &[Parity::Even]);
        let base = b.base_chart().unwrap();
        let t = vec![vec![Poly::int(&base, 2)]];
        let ti = vec![vec![Poly::constant(&base, crate::kernel::ratio(1, 2))]];
        let s = frame_change(&b, &t, &ti, None, Side::Dual).unwrap();
        let c = b.dual_phase().unwrap();
        let e = |s: &str| parse_expr(s, c.chart()).unwrap();
        assert_eq!(s.image("eta1").unwrap(), &e("1/2*eta1"));
        assert_eq!(s.image("p_eta1").unwrap(), &e("2*p_eta1"));
        assert_eq!(s.image("p_x1").unwrap(), &e("p_x1"));
    }

    #[test]
    fn frame_change_rejects_non_inverse() {
        let b = BundleSpec::standard(&[Parity::Even], &[Parity::Even]);
        let base = b.base_chart().unwrap();
        let t = vec![vec![Poly::int(&base, 2)]];
        let ti = vec![vec![Poly::int(&base, 2)]];
        assert!(matches!(
            frame_change(&b, &t, &ti, None, Side::Dual).unwrap_err(),
            Error::NotInverse(_)
        ));
        let odd_entry = vec![vec![Poly::var(&base, "x1").unwrap()]];
        assert!(frame_change(&b, &odd_entry, &ti, None, Side::Dual).is_err());
    }

    #[test]
    fn r_preserves_brackets() {
        let b = BundleSpec::standard(&[Parity::Even, Parity::Odd], &[Parity::Even, Parity::Odd]);
        let r = dvb_morphism(&b).unwrap();
        let out = check_bracket_preservation(&r, &b.phase().unwrap(), &b.dual_phase().unwrap()).unwrap();
        assert!(out.passed(), "{:?}", out.residual);
    }

    fn unipotent(b: &BundleSpec) -> (FrameMatrix, FrameMatrix) {
        let base = b.base_chart().unwrap();
        let x = Poly::var(&base, "x1").unwrap();
        let (one, zero) = (Poly::one(&base), Poly::zero(&base));
        (
            vec![vec![one.clone(), x.clone()], vec![zero.clone(), one.clone()]],
            vec![vec![one.clone(), -&x], vec![zero, one]],
        )
    }

    #[test]
    fn frame_change_is_canonical_on_both_sides() {
        let b = BundleSpec::standard(&[Parity::Even], &[Parity::Even, Parity::Even]);
        let (t, ti) = unipotent(&b);
        for side in [Side::Dual, Side::Direct] {
            let pc = match side {
                Side::Dual => b.dual_phase().unwrap(),
                Side::Direct => b.phase().unwrap(),
            };
            let s = frame_change(&b, &t, &ti, None, side).unwrap();
            let out = check_bracket_preservation(&s, &pc, &pc).unwrap();
            assert!(out.passed(), "{side:?}: {:?} at {:?}", out.residual, out.witness);
        }
    }

    #[test]
    fn frame_change_with_base_change_and_odd_fibre() {
        let b = BundleSpec::standard(&[Parity::Even, Parity::Even], &[Parity::Even, Parity::Odd]);
        let base = b.base_chart().unwrap();
        let e = |s: &str| parse_expr(s, &base).unwrap();
        // odd entries must vanish over an even base
        let t = vec![vec![e("1"), e("0")], vec![e("0"), e("1")]];
        let ti = t.clone();
        let bc = BaseChange {
            forward: vec![e("x1 + x2^2"), e("x2")],
            inverse: vec![e("x1 - x2^2"), e("x2")],
        };
        for side in [Side::Dual, Side::Direct] {
            let pc = match side {
                Side::Dual => b.dual_phase().unwrap(),
                Side::Direct => b.phase().unwrap(),
            };
            let s = frame_change(&b, &t, &ti, Some(&bc), side).unwrap();
            let out = check_bracket_preservation(&s, &pc, &pc).unwrap();
            assert!(out.passed(), "{side:?}: {:?} at {:?}", out.residual, out.witness);
        }
    }

    #[test]
    fn super_frame_change_is_canonical() {
        let b = BundleSpec::standard(&[Parity::Even, Parity::Odd], &[Parity::Even, Parity::Odd]);
        let base = b.base_chart().unwrap();
        let e = |s: &str| parse_expr(s, &base).unwrap();
        let t = vec![vec![e("1"), e("x2")], vec![e("0"), e("1")]];
        let ti = vec![vec![e("1"), e("-x2")], vec![e("0"), e("1")]];
        for side in [Side::Dual, Side::Direct] {
            let pc = match side {
                Side::Dual => b.dual_phase().unwrap(),
                Side::Direct => b.phase().unwrap(),
            };
            let s = frame_change(&b, &t, &ti, None, side).unwrap();
            let out = check_bracket_preservation(&s, &pc, &pc).unwrap();
            assert!(out.passed(), "{side:?}: {:?} at {:?}", out.residual, out.witness);
        }
    }
}
