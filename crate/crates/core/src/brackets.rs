//! The derived odd Jacobi bracket with its coordinate formula, axiom
//! checkers for ε-graded brackets, and structure verifiers.

use rayon::prelude::*;

use crate::algebroids::JacobiAlgebroidSpec;
use crate::error::{Error, Result};
use crate::kernel::{Chart, Degree, Derivation, Parity, Poly, Rational, Substitution};
use crate::phase::{poisson, PhaseChart};
use crate::report::{BracketReport, ConditionOutcome, Residual};

/// An odd Jacobi structure `(S, 𝒬)` on a cotangent chart. Validity is not
/// assumed; see [`verify_odd_jacobi`].
#[derive(Clone, Debug)]
pub struct OddJacobiStructure {
    phase: PhaseChart,
    s: Poly,
    q: Poly,
}

fn ensure_parity(name: &str, f: &Poly, want: Parity) -> Result<()> {
    if f.parity_of().admits(want) {
        Ok(())
    } else {
        Err(Error::ParityMismatch {
            name: name.into(),
            expected: want,
            found: f.parity_of().to_string(),
        })
    }
}

fn ensure_weight(name: &str, f: &Poly, want: i64) -> Result<()> {
    if f.weight_of().admits(want) {
        Ok(())
    } else {
        Err(Error::WeightMismatch {
            name: name.into(),
            expected: want,
            found: f.weight_of().to_string(),
        })
    }
}

impl OddJacobiStructure {
    /// `weighted` additionally requires `S` and `𝒬` to have weight −1.
    pub fn new(phase: &PhaseChart, s: Poly, q: Poly, weighted: bool) -> Result<Self> {
        let s = s.transfer(phase.chart())?;
        let q = q.transfer(phase.chart())?;
        ensure_parity("S", &s, Parity::Odd)?;
        ensure_parity("Q", &q, Parity::Odd)?;
        if phase.momentum_degree(&s) > 2 {
            return Err(Error::Shape("S must be at most quadratic in momenta".into()));
        }
        if phase.momentum_degree(&q) > 1 {
            return Err(Error::Shape("Q must be at most linear in momenta".into()));
        }
        if weighted {
            ensure_weight("S", &s, -1)?;
            ensure_weight("Q", &q, -1)?;
        }
        Ok(OddJacobiStructure {
            phase: phase.clone(),
            s,
            q,
        })
    }

    pub fn phase(&self) -> &PhaseChart {
        &self.phase
    }

    pub fn s(&self) -> &Poly {
        &self.s
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }
}

/// An odd vector field `D` with an odd curving function `q` on one chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiQStructure {
    d: Derivation,
    q: Poly,
}

impl QuasiQStructure {
    pub fn new(d: Derivation, q: Poly) -> Result<Self> {
        let q = q.transfer(d.chart())?;
        if d.parity() != Parity::Odd && !d.is_zero() {
            return Err(Error::ParityMismatch {
                name: "D".into(),
                expected: Parity::Odd,
                found: d.parity().to_string(),
            });
        }
        ensure_parity("q", &q, Parity::Odd)?;
        let d = if d.parity() == Parity::Odd {
            d
        } else {
            Derivation::zero(d.chart(), Parity::Odd)
        };
        Ok(QuasiQStructure { d, q })
    }

    pub fn chart(&self) -> &Chart {
        self.d.chart()
    }

    pub fn d(&self) -> &Derivation {
        &self.d
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }
}

/// Which Leibniz rule [`check_axioms`] tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeibnizForm {
    /// `{a,bc} = {a,b}c + (−1)^((ã+ε)b̃) b{a,c}`
    Strict,
    /// The strict rule corrected by `−{a,1}bc`.
    Anomaly,
}

fn parity(f: &Poly) -> Result<Parity> {
    match f.parity_of() {
        Degree::Exactly(p) => Ok(p),
        Degree::Any => Ok(Parity::Even),
        Degree::Inhomogeneous => Err(Error::ParityMismatch {
            name: f.to_string(),
            expected: Parity::Even,
            found: "inhomogeneous".into(),
        }),
    }
}

fn signed(f: Poly, sign: i32) -> Poly {
    if sign < 0 {
        -f
    } else {
        f
    }
}

type Check = (Residual, Vec<String>);

fn run_grid<T: Sync>(
    name: &str,
    items: &[T],
    f: impl Fn(&T) -> Result<Check> + Sync,
) -> Result<ConditionOutcome> {
    let results: Vec<Result<Check>> = items.par_iter().map(&f).collect();
    let mut out = ConditionOutcome::new(name);
    for r in results {
        let (res, witness) = r?;
        out.record(res, witness);
    }
    Ok(out)
}

/// Checks the four ε-parameterised bracket axioms (grading, skewsymmetry,
/// Jacobi, Leibniz) on all pairs and triples of `generators`, exactly.
pub fn check_axioms<B>(
    bracket: B,
    epsilon: Parity,
    generators: &[Poly],
    leibniz: LeibnizForm,
) -> Result<BracketReport>
where
    B: Fn(&Poly, &Poly) -> Result<Poly> + Sync,
{
    let gens: Vec<(Poly, Parity)> = generators
        .iter()
        .map(|g| Ok((g.clone(), parity(g)?)))
        .collect::<Result<_>>()?;
    let n = gens.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
        .collect();
    let e = epsilon;
    let w2 = |a: &Poly, b: &Poly| vec![a.to_string(), b.to_string()];
    let w3 = |a: &Poly, b: &Poly, c: &Poly| vec![a.to_string(), b.to_string(), c.to_string()];

    let mut report = BracketReport::new();
    report.push(run_grid("grading", &pairs, |&(i, j)| {
        let ((a, pa), (b, pb)) = (&gens[i], &gens[j]);
        let r = bracket(a, b)?;
        let want = *pa + *pb + e;
        // a wrong-parity result is its own residual
        let res = if r.parity_of().admits(want) {
            Poly::zero(r.chart())
        } else {
            r.filter_terms(|m| m.parity(r.chart()) != want)
        };
        Ok((Residual::Poly(res), w2(a, b)))
    })?);
    report.push(run_grid("skewsymmetry", &pairs, |&(i, j)| {
        let ((a, pa), (b, pb)) = (&gens[i], &gens[j]);
        let ab = bracket(a, b)?;
        let ba = bracket(b, a)?;
        let res = &ab + &signed(ba, (*pa + e).koszul(*pb + e));
        Ok((Residual::Poly(res), w2(a, b)))
    })?);
    report.push(run_grid("jacobi", &triples, |&(i, j, k)| {
        let ((a, pa), (b, pb), (c, pc)) = (&gens[i], &gens[j], &gens[k]);
        let t1 = signed(bracket(a, &bracket(b, c)?)?, (*pa + e).koszul(*pc + e));
        let t2 = signed(bracket(b, &bracket(c, a)?)?, (*pb + e).koszul(*pa + e));
        let t3 = signed(bracket(c, &bracket(a, b)?)?, (*pc + e).koszul(*pb + e));
        Ok((Residual::Poly(&(&t1 + &t2) + &t3), w3(a, b, c)))
    })?);
    let leibniz_name = match leibniz {
        LeibnizForm::Strict => "leibniz",
        LeibnizForm::Anomaly => "leibniz (anomaly form)",
    };
    report.push(run_grid(leibniz_name, &triples, |&(i, j, k)| {
        let ((a, pa), (b, pb), (c, _)) = (&gens[i], &gens[j], &gens[k]);
        let lhs = bracket(a, &(b * c))?;
        let mut rhs = &bracket(a, b)? * c;
        rhs += &signed(b * &bracket(a, c)?, (*pa + e).koszul(*pb));
        if leibniz == LeibnizForm::Anomaly {
            let one = Poly::one(a.chart());
            rhs -= &(&(&bracket(a, &one)? * b) * c);
        }
        Ok((Residual::Poly(&lhs - &rhs), w3(a, b, c)))
    })?);
    Ok(report)
}

/// Reads a momentum-free function onto the phase chart.
fn momentum_free_input(j: &OddJacobiStructure, x: &Poly, what: &str) -> Result<Poly> {
    let x = x.transfer(j.phase.chart())?;
    if !j.phase.is_momentum_free(&x) {
        return Err(Error::MomentumDependence(format!("{what} = {x}")));
    }
    Ok(x)
}

/// The derived odd Jacobi bracket
/// `[[X,Y]] = (−1)^(X̃+1){{S,X},Y} − (−1)^(X̃+1){𝒬,XY}` of two momentum-free
/// functions; the result lives on the base chart of the structure.
pub fn odd_jacobi_bracket(j: &OddJacobiStructure, x: &Poly, y: &Poly) -> Result<Poly> {
    let pc = &j.phase;
    let x = momentum_free_input(j, x, "X")?;
    let y = momentum_free_input(j, y, "Y")?;
    let mut out = Poly::zero(pc.chart());
    for (px, xc) in x.parity_components() {
        let sx = poisson(&j.s, &xc, pc)?;
        let first = poisson(&sx, &y, pc)?;
        let xcy = &xc * &y;
        let second = poisson(&j.q, &xcy, pc)?;
        let sign = px.flip().sign();
        out += &signed(&first - &second, sign);
    }
    if !pc.is_momentum_free(&out) {
        return Err(Error::Internal(format!(
            "derived bracket of momentum-free inputs depends on momenta: {out}"
        )));
    }
    out.transfer(pc.base())
}

/// The closed coordinate formula for the derived bracket of a structure in
/// linear anchor/bracket/cocycle form, read directly from the structure functions of `spec`.
///
/// Inputs and result live on the ΠE* chart of the spec.
pub fn coordinate_bracket(spec: &JacobiAlgebroidSpec, x: &Poly, y: &Poly) -> Result<Poly> {
    let b = spec.bundle();
    let chart = b.dual_chart()?;
    let x = x.transfer(&chart)?;
    let y = y.transfer(&chart)?;
    let base = b.base_chart()?;
    let n = base.len();
    let r = b.rank();
    let lift = |p: &Poly| p.transfer(&chart);
    let eta = |a: usize| n + a;
    let mut out = Poly::zero(&chart);
    for (px, xc) in x.parity_components() {
        let xt = px;
        for al in 0..r {
            let pa = b.fibre_parity(al);
            let dx_eta = xc.partial_at(eta(al));
            let dy_eta = y.partial_at(eta(al));
            for (ai, (_, px_a)) in b.base.iter().enumerate() {
                let q = lift(spec.anchor(al, ai))?;
                if q.is_zero() {
                    continue;
                }
                // (−1)^((X̃+α̃+1)(Ã+1)) ∂X/∂η_α ∂Y/∂x^A
                let s1 = (xt + pa).flip().koszul(px_a.flip());
                let t1 = signed(&dx_eta * &y.partial_at(ai), s1);
                // −(−1)^((X̃+1)α̃) ∂X/∂x^A ∂Y/∂η_α
                let s2 = xt.flip().koszul(pa);
                let t2 = signed(&xc.partial_at(ai) * &dy_eta, -s2);
                out += &(&q * &(&t1 + &t2));
            }
            for be in 0..r {
                let pb = b.fibre_parity(be);
                let dx_b = xc.partial_at(eta(be));
                if dx_b.is_zero() || dy_eta.is_zero() {
                    continue;
                }
                let mut ce = Poly::zero(&chart);
                for ga in 0..r {
                    // the formula indexes the constant as Q_{αβ}^γ
                    let c = lift(spec.bracket(al, be, ga))?;
                    ce += &(&c * &Poly::var_at(&chart, eta(ga)));
                }
                // −(−1)^((X̃+1)α̃ + β̃)
                let s = xt.flip().koszul(pa) * pb.sign();
                out += &signed(&(&ce * &dx_b) * &dy_eta, -s);
            }
            let qa = lift(spec.cocycle(al))?;
            if !qa.is_zero() {
                out += &signed(&(&qa * &dx_eta) * &y, xt.sign());
                out += &(&(&xc * &qa) * &dy_eta);
            }
        }
    }
    Ok(out)
}

/// The three conditions `{𝒬,𝒬} = 0`, `{𝒬,S} = 0`, `{S,S} = −2𝒬S`.
pub fn verify_odd_jacobi(j: &OddJacobiStructure) -> Result<BracketReport> {
    let pc = &j.phase;
    let (s, q) = (&j.s, &j.q);
    let mut report = BracketReport::new();
    report.push(ConditionOutcome::from_poly("{Q,Q} = 0", poisson(q, q, pc)?));
    report.push(ConditionOutcome::from_poly("{Q,S} = 0", poisson(q, s, pc)?));
    let qs = (q * s).scale_int(2);
    report.push(ConditionOutcome::from_poly(
        "{S,S} = -2QS",
        &poisson(s, s, pc)? + &qs,
    ));
    Ok(report)
}

/// `{S,S} = 0`.
pub fn verify_schouten(s: &Poly, pc: &PhaseChart) -> Result<BracketReport> {
    let s = s.transfer(pc.chart())?;
    ensure_parity("S", &s, Parity::Odd)?;
    let mut report = BracketReport::new();
    report.push(ConditionOutcome::from_poly("{S,S} = 0", poisson(&s, &s, pc)?));
    Ok(report)
}

/// `½[D,D] = qD` coefficientwise and `D(q) = 0`.
pub fn verify_quasi_q(qq: &QuasiQStructure) -> Result<BracketReport> {
    let d = qq.d();
    let half = Rational::new(1.into(), 2.into());
    let square = d.commutator(d)?.scale(&half);
    let residual = square.try_sub(&d.left_mul(qq.q())?)?;
    let mut report = BracketReport::new();
    report.push(ConditionOutcome::from_residual(
        "D^2 = qD",
        Residual::Derivation(residual),
    ));
    report.push(ConditionOutcome::from_poly("D(q) = 0", d.apply(qq.q())?));
    Ok(report)
}

/// Checks that the pullback `sigma` (target functions to source functions)
/// relates the two vector fields on every target generator and matches the
/// curving functions.
pub fn check_morphism(
    sigma: &Substitution,
    source: &QuasiQStructure,
    target: &QuasiQStructure,
) -> Result<BracketReport> {
    target.chart().ensure_same(sigma.domain())?;
    source.chart().ensure_same(sigma.codomain())?;
    let mut related = ConditionOutcome::new("D_source(s*f) = s*(D_target f)");
    for i in target.chart().coordinates() {
        let z = Poly::var_at(target.chart(), i);
        let lhs = source.d().apply(sigma.image_at(i))?;
        let rhs = sigma.apply(&target.d().apply(&z)?)?;
        related.record(Residual::Poly(&lhs - &rhs), vec![z.to_string()]);
    }
    let mut report = BracketReport::new();
    report.push(related);
    report.push(ConditionOutcome::from_poly(
        "s*(q_target) = q_source",
        &sigma.apply(target.q())? - source.q(),
    ));
    Ok(report)
}

/// `X ↦ [[X,1]]`. For structures in linear form this is the derivation
/// `(−1)^X̃ Q_α ∂X/∂η_α`.
pub fn anomaly(j: &OddJacobiStructure, x: &Poly) -> Result<Poly> {
    let one = Poly::one(j.phase.base());
    odd_jacobi_bracket(j, x, &one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroids::{build_structure, odd_contact, JacobiAlgebroidSpec};
    use crate::expr::parse_expr;
    use crate::phase::{cotangent, BundleSpec};
    use crate::random;

    fn mixed_phase() -> PhaseChart {
        let base = BundleSpec::standard(&[Parity::Even, Parity::Even, Parity::Odd, Parity::Odd], &[])
            .base_chart()
            .unwrap();
        cotangent(&base).unwrap()
    }

    fn generators(chart: &Chart, seed: u64, extra: usize) -> Vec<Poly> {
        let mut r = random::rng(seed);
        let vars: Vec<usize> = chart.coordinates().collect();
        let mut gens: Vec<Poly> = vars.iter().map(|&i| Poly::var_at(chart, i)).collect();
        gens.extend((0..extra).map(|_| random::monomial(&mut r, chart, &vars, 2)));
        gens
    }

    #[test]
    fn poisson_is_even_bracket() {
        let pc = mixed_phase();
        let gens = generators(pc.chart(), 1, 4);
        let report = check_axioms(|a, b| poisson(a, b, &pc), Parity::Even, &gens, LeibnizForm::Strict).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn poisson_with_wrong_epsilon_fails_skewsymmetry() {
        let pc = mixed_phase();
        let gens = generators(pc.chart(), 2, 0);
        let report = check_axioms(|a, b| poisson(a, b, &pc), Parity::Odd, &gens, LeibnizForm::Strict).unwrap();
        assert!(report.failed_names().contains(&"skewsymmetry"));
        assert!(!report.entry("skewsymmetry").unwrap().residual.as_ref().unwrap().is_zero());
    }

    fn contact_spec() -> (OddJacobiStructure, JacobiAlgebroidSpec) {
        let oc = odd_contact(1).unwrap();
        let spec = JacobiAlgebroidSpec::from_structure(&oc.bundle, &oc.jacobi).unwrap();
        (oc.jacobi, spec)
    }

    #[test]
    fn derived_bracket_is_an_odd_jacobi_algebra() {
        let (j, _) = contact_spec();
        let gens = generators(j.phase().base(), 3, 2);
        let bracket = |a: &Poly, b: &Poly| odd_jacobi_bracket(&j, a, b);
        let report = check_axioms(bracket, Parity::Odd, &gens, LeibnizForm::Anomaly).unwrap();
        assert!(report.passed(), "{report}");
        // the anomaly is really there
        let strict = check_axioms(bracket, Parity::Odd, &gens, LeibnizForm::Strict).unwrap();
        assert_eq!(strict.failed_names(), vec!["leibniz"]);
    }

    #[test]
    fn random_valid_structures_satisfy_the_axioms() {
        let mut r = random::rng(4);
        for _ in 0..2 {
            let spec = random::valid_constant_spec(&mut r).unwrap();
            let j = build_structure(&spec).unwrap();
            let gens = generators(j.phase().base(), 5, 2);
            let report =
                check_axioms(|a, b| odd_jacobi_bracket(&j, a, b), Parity::Odd, &gens, LeibnizForm::Anomaly).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn derived_bracket_rejects_momenta() {
        let (j, _) = contact_spec();
        let p = j.phase().var("p_x1").unwrap();
        let x = j.phase().var("x1").unwrap();
        assert!(matches!(odd_jacobi_bracket(&j, &p, &x), Err(Error::MomentumDependence(_))));
    }

    #[test]
    fn derived_bracket_weight_and_parity() {
        let (j, _) = contact_spec();
        let base = j.phase().base().clone();
        let mut r = random::rng(6);
        let vars: Vec<usize> = base.coordinates().collect();
        for _ in 0..20 {
            let x = random::monomial(&mut r, &base, &vars, 2);
            let y = random::monomial(&mut r, &base, &vars, 2);
            let z = odd_jacobi_bracket(&j, &x, &y).unwrap();
            if z.is_zero() {
                continue;
            }
            let (wx, wy) = (x.weight_of().exact().unwrap(), y.weight_of().exact().unwrap());
            assert!(z.weight_of().admits(wx + wy - 1), "[[{x}, {y}]] = {z}");
            let (px, py) = (x.parity_of().exact().unwrap(), y.parity_of().exact().unwrap());
            assert!(z.parity_of().admits(px + py + Parity::Odd));
        }
    }

    #[test]
    fn constants_bracket_to_zero() {
        let (j, _) = contact_spec();
        let one = Poly::one(j.phase().base());
        assert!(odd_jacobi_bracket(&j, &one, &one).unwrap().is_zero());
    }

    #[test]
    fn anomaly_is_the_cocycle_derivation() {
        let (j, spec) = contact_spec();
        let chart = spec.bundle().dual_chart().unwrap();
        let n = spec.base_chart().len();
        let mut r = random::rng(8);
        for _ in 0..20 {
            let x = random::momentum_free(&mut r, &chart, 3);
            let mut want = Poly::zero(&chart);
            for (px, xc) in x.parity_components() {
                for a in 0..spec.rank() {
                    let qa = spec.cocycle(a).transfer(&chart).unwrap();
                    want += &(&qa * &xc.partial_at(n + a)).scale_int(px.sign() as i64);
                }
            }
            assert_eq!(anomaly(&j, &x).unwrap(), want, "X = {x}");
        }
        // a derivation kills constants, so it is not multiplication by a function
        assert!(anomaly(&j, &Poly::one(&chart)).unwrap().is_zero());
        assert!(!anomaly(&j, &Poly::var(&chart, "tau").unwrap()).unwrap().is_zero());
    }

    #[test]
    fn anomaly_vanishes_without_cocycle() {
        let mut r = random::rng(9);
        let spec = random::valid_constant_spec(&mut r).unwrap();
        let spec = spec.with_cocycle(vec![Poly::zero(spec.base_chart()); spec.rank()]).unwrap();
        let j = build_structure(&spec).unwrap();
        let chart = spec.bundle().dual_chart().unwrap();
        for _ in 0..10 {
            let x = random::momentum_free(&mut r, &chart, 2);
            assert!(anomaly(&j, &x).unwrap().is_zero());
        }
    }

    #[test]
    fn odd_contact_verifies_and_sign_flip_fails() {
        let (j, _) = contact_spec();
        let report = verify_odd_jacobi(&j).unwrap();
        assert!(report.passed());
        assert_eq!(report.entries.len(), 3);
        let flipped = OddJacobiStructure::new(j.phase(), j.s().clone(), -j.q(), true).unwrap();
        let report = verify_odd_jacobi(&flipped).unwrap();
        assert_eq!(report.failed_names(), vec!["{S,S} = -2QS"]);
        let res = report.entry("{S,S} = -2QS").unwrap().residual.as_ref().unwrap();
        assert!(!res.is_zero());
    }

    #[test]
    fn zero_structure_verifies() {
        let pc = mixed_phase();
        let z = Poly::zero(pc.chart());
        let j = OddJacobiStructure::new(&pc, z.clone(), z, true).unwrap();
        assert!(verify_odd_jacobi(&j).unwrap().passed());
    }

    #[test]
    fn structure_shape_is_checked() {
        let pc = mixed_phase();
        let e = |s: &str| parse_expr(s, pc.chart()).unwrap();
        let z = Poly::zero(pc.chart());
        assert!(matches!(
            OddJacobiStructure::new(&pc, e("x1"), z.clone(), false),
            Err(Error::ParityMismatch { .. })
        ));
        assert!(matches!(
            OddJacobiStructure::new(&pc, e("p_x1*p_x2*p_x3"), z.clone(), false),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            OddJacobiStructure::new(&pc, z, e("p_x1*p_x3"), false),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn canonical_schouten_structure() {
        let b = BundleSpec::standard(&[Parity::Even, Parity::Even], &[Parity::Even, Parity::Even]);
        let pc = b.dual_phase().unwrap();
        let s = parse_expr("p_eta1*p_x1 + p_eta2*p_x2", pc.chart()).unwrap();
        assert!(verify_schouten(&s, &pc).unwrap().passed());
        let bad = parse_expr("p_eta1*x1*p_x1 + p_eta2*p_x1", pc.chart()).unwrap();
        let report = verify_schouten(&bad, &pc).unwrap();
        assert!(!report.passed());
        let res = report.entries[0].residual.as_ref().unwrap();
        assert!(!res.is_zero());
    }

    #[test]
    fn quasi_q_verification() {
        let oc = odd_contact(2).unwrap();
        assert!(verify_quasi_q(&oc.transport.quasi_q).unwrap().passed());
        let chart = oc.bundle.chart().unwrap();
        let zero = QuasiQStructure::new(Derivation::zero(&chart, Parity::Odd), Poly::zero(&chart)).unwrap();
        assert!(verify_quasi_q(&zero).unwrap().passed());
        let wrong = QuasiQStructure::new(oc.transport.quasi_q.d().clone(), Poly::zero(&chart)).unwrap();
        assert_eq!(verify_quasi_q(&wrong).unwrap().failed_names(), vec!["D^2 = qD"]);
    }

    #[test]
    fn identity_is_a_morphism_and_curving_must_match() {
        let oc = odd_contact(1).unwrap();
        let qq = &oc.transport.quasi_q;
        let id = Substitution::identity(qq.chart(), qq.chart()).unwrap();
        assert!(check_morphism(&id, qq, qq).unwrap().passed());
        let other = QuasiQStructure::new(qq.d().clone(), -qq.q()).unwrap();
        let report = check_morphism(&id, qq, &other).unwrap();
        assert_eq!(report.failed_names(), vec!["s*(q_target) = q_source"]);
    }
}
