use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::{Chart, Degree, Monomial, Parity};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A supercommutative polynomial with exact rational coefficients on a chart.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    chart: Chart,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(chart: &Chart) -> Poly {
        Poly {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(chart: &Chart) -> Poly {
        Poly::constant(chart, Rational::one())
    }

    pub fn constant(chart: &Chart, c: Rational) -> Poly {
        let mut p = Poly::zero(chart);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(chart.len()), c);
        }
        p
    }

    pub fn int(chart: &Chart, n: i64) -> Poly {
        Poly::constant(chart, rat(n))
    }

    pub fn var(chart: &Chart, name: &str) -> Result<Poly> {
        Ok(Poly::var_at(chart, chart.index_of(name)?))
    }

    pub fn var_at(chart: &Chart, i: usize) -> Poly {
        Poly::monomial(chart, Monomial::var(chart.len(), i), Rational::one())
    }

    pub fn monomial(chart: &Chart, m: Monomial, c: Rational) -> Poly {
        let mut p = Poly::zero(chart);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.chart.len()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }


    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.chart);
        }
        Poly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Poly {
        self.scale(&rat(n))
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.chart.ensure_same(&other.chart)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Supercommutative product in normal form.
    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.chart.ensure_same(&other.chart)?;
        let mut out = Poly::zero(&self.chart);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, negative)) = ma.mul(mb, &self.chart) {
                    let c = ca * cb;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.chart);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn parity_of(&self) -> Degree<Parity> {
        let mut seen = None;
        for m in self.terms.keys() {
            let p = m.parity(&self.chart);
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => return Degree::Inhomogeneous,
                _ => {}
            }
        }
        seen.map_or(Degree::Any, Degree::Exactly)
    }

    pub fn weight_of(&self) -> Degree<i64> {
        let mut seen = None;
        for m in self.terms.keys() {
            let w = m.weight(&self.chart);
            match seen {
                None => seen = Some(w),
                Some(q) if q != w => return Degree::Inhomogeneous,
                _ => {}
            }
        }
        seen.map_or(Degree::Any, Degree::Exactly)
    }

    /// Splits into (even part, odd part).
    pub fn split_parity(&self) -> (Poly, Poly) {
        let mut even = Poly::zero(&self.chart);
        let mut odd = Poly::zero(&self.chart);
        for (m, c) in &self.terms {
            if m.parity(&self.chart).is_odd() {
                odd.terms.insert(m.clone(), c.clone());
            } else {
                even.terms.insert(m.clone(), c.clone());
            }
        }
        (even, odd)
    }

    /// Homogeneous parity components paired with their parity; zero yields nothing.
    pub fn parity_components(&self) -> Vec<(Parity, Poly)> {
        let (e, o) = self.split_parity();
        let mut out = Vec::new();
        if !e.is_zero() {
            out.push((Parity::Even, e));
        }
        if !o.is_zero() {
            out.push((Parity::Odd, o));
        }
        out
    }

    /// Keeps the terms selected by `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Poly {
        Poly {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Largest total exponent among the variables selected by `which`.
    pub fn degree_in(&self, which: impl Fn(usize) -> bool) -> i64 {
        self.terms
            .keys()
            .map(|m| {
                m.exps()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| which(*i))
                    .map(|(_, &e)| e as i64)
                    .sum::<i64>()
            })
            .max()
            .unwrap_or(0)
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exp(i) != 0)
    }

    /// Left derivative with respect to chart variable `i`, ignoring any
    /// Laurent chain rule.
    pub(crate) fn raw_partial(&self, i: usize) -> Poly {
        let chart = &self.chart;
        let odd = chart.var(i).parity.is_odd();
        let mut out = Poly::zero(chart);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            if odd {
                let sign_neg = m.odd_before(i, chart) % 2 == 1;
                let c = if sign_neg { -c.clone() } else { c.clone() };
                out.add_term(m.with_exp(i, 0), c);
            } else {
                out.add_term(m.with_exp(i, e - 1), c * rat(e as i64));
            }
        }
        out
    }

    /// Left derivative ∂f/∂z. For an odd `z` at position j of a normal-form
    /// monomial the sign is (−1)^(odd factors left of j). Differentiating by a
    /// coordinate `t` also differentiates every Laurent generator `u = e^(−t)`.
    pub fn partial(&self, name: &str) -> Result<Poly> {
        Ok(self.partial_at(self.chart.index_of(name)?))
    }

    pub fn partial_at(&self, i: usize) -> Poly {
        let mut out = self.raw_partial(i);
        for &u in self.chart.exp_links(i) {
            let du = self.raw_partial(u);
            if !du.is_zero() {
                let uu = Poly::var_at(&self.chart, u);
                out -= &(&uu * &du);
            }
        }
        out
    }

    /// Right derivative: ∂ᴿ(f·z)/∂z = f. Related to the left derivative by
    /// ∂ᴿf/∂z = (−1)^(z̃(f̃+1)) ∂f/∂z on each parity component.
    pub fn partial_right_at(&self, i: usize) -> Poly {
        let z = self.chart.var(i).parity;
        let mut out = Poly::zero(&self.chart);
        for (p, comp) in self.parity_components() {
            let d = comp.partial_at(i);
            if z.koszul(p.flip()) < 0 {
                out -= &d;
            } else {
                out += &d;
            }
        }
        out
    }

    /// The same polynomial read on another chart, matching the variables it
    /// actually uses by name.
    pub fn transfer(&self, target: &Chart) -> Result<Poly> {
        if self.chart.same(target) {
            return Ok(self.clone());
        }
        let mut map: Vec<Option<usize>> = vec![None; self.chart.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 || map[i].is_some() {
                    continue;
                }
                let v = self.chart.var(i);
                let j = target.index_of(&v.name)?;
                let tv = target.var(j);
                if tv.parity != v.parity {
                    return Err(Error::ParityMismatch {
                        name: v.name.clone(),
                        expected: v.parity,
                        found: tv.parity.to_string(),
                    });
                }
                map[i] = Some(j);
            }
        }
        // reading the same word in a different variable order can reorder odd factors
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].expect("mapped above");
                let mut exps = vec![0; target.len()];
                exps[j] = e;
                if e < 0 && !target.is_laurent(j) {
                    return Err(Error::NegativeExponent(target.var(j).name.clone()));
                }
                let f = Poly::monomial(target, Monomial::from_exps(exps), Rational::one());
                term = &term * &f;
            }
            out += &term;
        }
        Ok(out)
    }

    pub fn is_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::render(self))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;

    /// Panics if the charts differ; use [`Poly::try_add`] for a checked sum.
    fn add(self, rhs: &'a Poly) -> Poly {
        self.try_add(rhs).expect("chart mismatch in Poly addition")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;

    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;

    /// Panics if the charts differ; use [`Poly::try_mul`] for a checked product.
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.try_mul(rhs).expect("chart mismatch in Poly multiplication")
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        -&self
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        assert!(self.chart.same(&rhs.chart), "chart mismatch in Poly addition");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        assert!(self.chart.same(&rhs.chart), "chart mismatch in Poly subtraction");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Variable;

    fn chart() -> Chart {
        Chart::new(vec![
            Variable::even("x", 0),
            Variable::odd("t1", 1),
            Variable::odd("t2", 1),
        ])
        .unwrap()
    }

    fn v(c: &Chart, n: &str) -> Poly {
        Poly::var(c, n).unwrap()
    }

    #[test]
    fn odd_anticommute_and_square() {
        let c = chart();
        let (t1, t2) = (v(&c, "t1"), v(&c, "t2"));
        assert_eq!(&t2 * &t1, -(&t1 * &t2));
        assert!((&t1 * &t1).is_zero());
    }

    #[test]
    fn product_with_even_factor() {
        // (x + t1 t2) x = x^2 + x t1 t2
        let c = chart();
        let x = v(&c, "x");
        let t12 = &v(&c, "t1") * &v(&c, "t2");
        let lhs = &(&x + &t12) * &x;
        let rhs = &(&x * &x) + &(&x * &t12);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.len(), 2);
    }

    #[test]
    fn left_derivative_signs() {
        let c = chart();
        let (t1, t2, x) = (v(&c, "t1"), v(&c, "t2"), v(&c, "x"));
        let t12 = &t1 * &t2;
        assert_eq!(t12.partial("t2").unwrap(), -&t1);
        assert_eq!(t12.partial("t1").unwrap(), t2);
        let f = &(&x * &x) * &t1;
        assert_eq!(f.partial("x").unwrap(), &(&x * &t1).scale_int(2) * &Poly::one(&c));
        assert!(f.partial("nope").is_err());
    }

    #[test]
    fn right_derivative() {
        let c = chart();
        let (t1, t2) = (v(&c, "t1"), v(&c, "t2"));
        let t12 = &t1 * &t2;
        assert_eq!(t12.partial_right_at(2), t1);
        assert_eq!(t12.partial_right_at(1), -&t2);
    }

    #[test]
    fn homogeneity_queries() {
        let c = chart();
        let (x, t1) = (v(&c, "x"), v(&c, "t1"));
        assert_eq!(Poly::zero(&c).parity_of(), Degree::Any);
        assert_eq!(Poly::zero(&c).weight_of(), Degree::Any);
        assert_eq!(t1.parity_of(), Degree::Exactly(Parity::Odd));
        assert_eq!((&x + &t1).weight_of(), Degree::Inhomogeneous);
        assert_eq!((&x + &t1).parity_of(), Degree::Inhomogeneous);
        assert_eq!((&x * &t1).weight_of(), Degree::Exactly(1));
    }

    #[test]
    fn chart_mismatch_is_an_error() {
        let a = chart();
        let b = Chart::new(vec![Variable::even("y", 0)]).unwrap();
        assert_eq!(
            v(&a, "x").try_mul(&v(&b, "y")).unwrap_err(),
            Error::ChartMismatch
        );
    }

    #[test]
    fn laurent_chain_rule() {
        use crate::kernel::VarKind;
        let c = Chart::with_kinds(
            vec![Variable::even("t", 0), Variable::even("u", 0)],
            vec![VarKind::Coordinate, VarKind::ExpNeg("t".into())],
        )
        .unwrap();
        let u = v(&c, "u");
        let t = v(&c, "t");
        // d/dt (u^2 t) = -2 u^2 t + u^2
        let f = &(&u * &u) * &t;
        let expect = &(&(&u * &u) * &t).scale_int(-2) + &(&u * &u);
        assert_eq!(f.partial("t").unwrap(), expect);
    }
}
