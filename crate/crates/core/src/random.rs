//! Seeded generators for property tests and the acceptance suite.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebroids::JacobiAlgebroidSpec;
use crate::brackets::QuasiQStructure;
use crate::error::{Error, Result};
use crate::kernel::{euler_field, rat, ratio, Chart, Derivation, Parity, Poly, Rational, Variable};
use crate::phase::{frame_change, BundleSpec, Side};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero rational `n/d` with `|n| ≤ 4`, `1 ≤ d ≤ 3`.
pub fn coefficient(rng: &mut TestRng) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-4..=4);
        if n != 0 {
            return ratio(n, rng.gen_range(1..=3));
        }
    }
}

/// A random monomial of total degree `1..=max_degree` in `vars`, as a Poly
/// with coefficient one; odd variables appear at most once.
pub fn monomial(rng: &mut TestRng, chart: &Chart, vars: &[usize], max_degree: u32) -> Poly {
    let degree = rng.gen_range(1..=max_degree.max(1));
    let mut p = Poly::one(chart);
    for _ in 0..degree {
        let &i = vars.choose(rng).expect("nonempty variable list");
        let next = &p * &Poly::var_at(chart, i);
        if !next.is_zero() {
            p = next;
        }
    }
    p
}

/// Constraints for [`poly`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Shape {
    pub parity: Option<Parity>,
    pub weight: Option<i64>,
    pub max_degree: u32,
    pub terms: usize,
    /// Allow the constant monomial.
    pub constant: bool,
}

/// A random polynomial in `vars` whose terms all satisfy `shape`. May return
/// fewer terms (or zero) when few monomials qualify.
pub fn poly(rng: &mut TestRng, chart: &Chart, vars: &[usize], shape: Shape) -> Poly {
    let mut out = Poly::zero(chart);
    let one = Poly::one(chart);
    let fits = |m: &Poly| {
        shape.parity.is_none_or(|p| m.parity_of().admits(p))
            && shape.weight.is_none_or(|w| m.weight_of().admits(w))
    };
    let mut found = 0;
    for _ in 0..shape.terms * 20 {
        if found == shape.terms {
            break;
        }
        let m = if shape.constant && rng.gen_ratio(1, 6) || vars.is_empty() {
            one.clone()
        } else {
            monomial(rng, chart, vars, shape.max_degree)
        };
        let is_one = m.as_constant().is_some_and(|c| c.is_one());
        if (is_one && !shape.constant) || !fits(&m) {
            continue;
        }
        out += &m.scale(&coefficient(rng));
        found += 1;
    }
    out
}

/// Random linear-form structure functions (polynomials in the base, parity
/// compatible); validity is not arranged.
pub fn structure_spec(rng: &mut TestRng, bundle: &BundleSpec, max_degree: u32) -> Result<JacobiAlgebroidSpec> {
    let base = bundle.base_chart()?;
    let vars: Vec<usize> = (0..base.len()).collect();
    let r = bundle.rank();
    let mut entry = |p: Parity| {
        poly(
            rng,
            &base,
            &vars,
            Shape {
                parity: Some(p),
                weight: None,
                max_degree,
                terms: 2,
                constant: true,
            },
        )
    };
    let fp = |a: usize| bundle.fibre_parity(a);
    let anchor = (0..r)
        .map(|a| bundle.base.iter().map(|(_, pa)| entry(fp(a) + *pa)).collect())
        .collect();
    let brackets = (0..r)
        .map(|b| {
            (0..r)
                .map(|a| (0..r).map(|g| entry(fp(a) + fp(b) + fp(g))).collect())
                .collect()
        })
        .collect();
    let cocycle = (0..r).map(|a| entry(fp(a))).collect();
    JacobiAlgebroidSpec::new(bundle.clone(), anchor, brackets, cocycle)
}

/// A small Lie (super)algebra: parities, structure constants `C_{βα}^γ`
/// and a basis of even functionals vanishing on `[g, g]`.
#[derive(Clone, Debug)]
pub struct LiePreset {
    pub name: &'static str,
    pub parities: Vec<Parity>,
    pub constants: Vec<(usize, usize, usize, i64)>,
    pub characters: Vec<Vec<i64>>,
}

impl LiePreset {
    pub fn table(&self, scale: &Rational) -> Vec<Vec<Vec<Rational>>> {
        let r = self.parities.len();
        let mut t = vec![vec![vec![Rational::zero(); r]; r]; r];
        for &(b, a, g, v) in &self.constants {
            t[b][a][g] = rat(v) * scale;
        }
        t
    }
}

pub fn lie_presets() -> Vec<LiePreset> {
    use Parity::{Even, Odd};
    vec![
        LiePreset {
            name: "abelian",
            parities: vec![Even, Even],
            constants: vec![],
            characters: vec![vec![1, 0], vec![0, 1]],
        },
        LiePreset {
            name: "solvable2",
            parities: vec![Even, Even],
            constants: vec![(1, 0, 1, 1)],
            characters: vec![vec![1, 0]],
        },
        LiePreset {
            name: "super-ef",
            parities: vec![Even, Odd],
            constants: vec![(1, 0, 1, 1)],
            characters: vec![vec![1, 0]],
        },
        LiePreset {
            name: "heisenberg",
            parities: vec![Even, Even, Even],
            constants: vec![(1, 0, 2, 1)],
            characters: vec![vec![1, 0, 0], vec![0, 1, 0]],
        },
        LiePreset {
            name: "odd-square",
            parities: vec![Even, Odd],
            constants: vec![(1, 1, 0, 1)],
            characters: vec![],
        },
    ]
}

pub fn lie_preset(name: &str) -> Result<LiePreset> {
    lie_presets()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::Shape(format!("unknown preset `{name}`")))
}

fn random_character(rng: &mut TestRng, preset: &LiePreset) -> Vec<Rational> {
    let r = preset.parities.len();
    let mut out = vec![Rational::zero(); r];
    for ch in &preset.characters {
        if rng.gen_bool(0.7) {
            let c = coefficient(rng);
            for (o, &v) in out.iter_mut().zip(ch) {
                *o += rat(v) * &c;
            }
        }
    }
    out
}

/// Inverse of a square rational matrix by Gauss–Jordan elimination.
pub fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, pv) in a[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A random parity-preserving constant frame with its inverse.
pub fn constant_frame(rng: &mut TestRng, parities: &[Parity]) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let r = parities.len();
    let mut lower = vec![vec![Rational::zero(); r]; r];
    let mut upper = lower.clone();
    for i in 0..r {
        lower[i][i] = Rational::one();
        upper[i][i] = rat(if rng.gen_bool(0.5) { 1 } else { 2 });
        for j in 0..i {
            if parities[i] == parities[j] {
                lower[i][j] = rat(rng.gen_range(-2..=2));
                upper[j][i] = rat(rng.gen_range(-2..=2));
            }
        }
    }
    let t: Vec<Vec<Rational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| (0..r).map(|k| &lower[i][k] * &upper[k][j]).sum())
                .collect()
        })
        .collect();
    let inv = invert(&t).expect("triangular factors are invertible");
    (t, inv)
}

/// A valid constant-coefficient Jacobi algebroid over ℝ¹: a preset Lie
/// algebra, an anchor and a cocycle built from characters, merged and then
/// moved to a random constant frame.
pub fn valid_constant_spec(rng: &mut TestRng) -> Result<JacobiAlgebroidSpec> {
    let presets = lie_presets();
    let preset = presets.choose(rng).expect("presets").clone();
    valid_constant_spec_from(rng, &preset)
}

pub fn valid_constant_spec_from(rng: &mut TestRng, preset: &LiePreset) -> Result<JacobiAlgebroidSpec> {
    let bundle = BundleSpec::standard(&[Parity::Even], &preset.parities);
    let base = bundle.base_chart()?;
    let r = preset.parities.len();
    let k = coefficient(rng);
    let c = |v: &Rational| Poly::constant(&base, v.clone());
    let constants = preset.table(&k);
    let psi = random_character(rng, preset);
    let anchor: Vec<Vec<Poly>> = psi.iter().map(|v| vec![c(v)]).collect();
    let lie = JacobiAlgebroidSpec::new(
        bundle.clone(),
        anchor,
        constants
            .iter()
            .map(|m| m.iter().map(|v| v.iter().map(c).collect()).collect())
            .collect(),
        vec![Poly::zero(&base); r],
    )?;
    let q_field = lie.quasi_q()?.d().clone();
    let chart = q_field.chart().clone();
    let phi_coeffs = random_character(rng, preset);
    let mut phi = Poly::zero(&chart);
    for (a, v) in phi_coeffs.iter().enumerate() {
        phi += &Poly::var(&chart, &bundle.fibre_name(a))?.scale(v);
    }
    let e = euler_field(&chart);
    let d = q_field.try_add(&e.left_mul(&phi)?)?;
    let spec = JacobiAlgebroidSpec::from_quasi_q(&bundle, &QuasiQStructure::new(d, phi)?)?;
    if rng.gen_bool(0.5) {
        let (t, tinv) = constant_frame(rng, &preset.parities);
        reframe(&spec, &t, &tinv)
    } else {
        Ok(spec)
    }
}

/// The same structure written in the frame `ē = e·T`.
pub fn reframe(
    spec: &JacobiAlgebroidSpec,
    t: &[Vec<Rational>],
    tinv: &[Vec<Rational>],
) -> Result<JacobiAlgebroidSpec> {
    let b = spec.bundle();
    let base = b.base_chart()?;
    let lift = |m: &[Vec<Rational>]| -> Vec<Vec<Poly>> {
        m.iter()
            .map(|row| row.iter().map(|v| Poly::constant(&base, v.clone())).collect())
            .collect()
    };
    // old coordinates in terms of new ones
    let sigma = frame_change(b, &lift(tinv), &lift(t), None, Side::Dual)?;
    let j = crate::algebroids::build_structure(spec)?;
    let moved = crate::brackets::OddJacobiStructure::new(
        j.phase(),
        sigma.apply(j.s())?,
        sigma.apply(j.q())?,
        true,
    )?;
    JacobiAlgebroidSpec::from_structure(b, &moved)
}

/// Perturbs one parity-admissible constant of `spec` by a nonzero amount.
pub fn perturb(rng: &mut TestRng, spec: &JacobiAlgebroidSpec) -> Result<JacobiAlgebroidSpec> {
    let b = spec.bundle();
    let base = spec.base_chart();
    let r = b.rank();
    let fp = |a: usize| b.fibre_parity(a);
    let mut anchor = spec.anchor_table().to_vec();
    let mut brackets = spec.bracket_table().to_vec();
    let mut cocycle = spec.cocycle_table().to_vec();
    let bump = Poly::constant(base, coefficient(rng));
    loop {
        match rng.gen_range(0..3) {
            0 => {
                let a = rng.gen_range(0..r);
                let ai = rng.gen_range(0..b.base.len().max(1));
                if ai < b.base.len() && (fp(a) + b.base[ai].1) == Parity::Even {
                    anchor[a][ai] += &bump;
                    break;
                }
            }
            1 => {
                let (x, y, g) = (rng.gen_range(0..r), rng.gen_range(0..r), rng.gen_range(0..r));
                if fp(x) + fp(y) + fp(g) == Parity::Even {
                    brackets[x][y][g] += &bump;
                    break;
                }
            }
            _ => {
                let a = rng.gen_range(0..r);
                if fp(a) == Parity::Even {
                    cocycle[a] += &bump;
                    break;
                }
            }
        }
    }
    JacobiAlgebroidSpec::new(b.clone(), anchor, brackets, cocycle)
}

/// Random momentum-free functions on `chart` of degree ≤ `max_degree`
/// with homogeneous parity.
pub fn momentum_free(rng: &mut TestRng, chart: &Chart, max_degree: u32) -> Poly {
    let vars: Vec<usize> = chart.coordinates().collect();
    let parity = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
    let terms = rng.gen_range(1..=3);
    poly(
        rng,
        chart,
        &vars,
        Shape {
            parity: Some(parity),
            weight: None,
            max_degree,
            terms,
            constant: true,
        },
    )
}

/// A random derivation of the given parity with coefficients of degree
/// ≤ `max_degree`.
pub fn derivation(rng: &mut TestRng, chart: &Chart, parity: Parity, max_degree: u32) -> Derivation {
    let vars: Vec<usize> = chart.coordinates().collect();
    let mut d = Derivation::zero(chart, parity);
    for &i in &vars {
        if rng.gen_bool(0.5) {
            continue;
        }
        let want = parity + chart.var(i).parity;
        let terms = rng.gen_range(1..=2);
        let c = poly(
            rng,
            chart,
            &vars,
            Shape {
                parity: Some(want),
                weight: None,
                max_degree,
                terms,
                constant: true,
            },
        );
        d.set(i, c).expect("coefficient parity matches by construction");
    }
    d
}

/// A chart with two even and two odd coordinates of mixed weights.
pub fn mixed_chart() -> Chart {
    Chart::new(vec![
        Variable::even("x1", 0),
        Variable::even("x2", 2),
        Variable::odd("e1", 1),
        Variable::odd("e2", -1),
    ])
    .expect("distinct names")
}
