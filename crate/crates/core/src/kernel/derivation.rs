use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::{rat, Chart, Parity, Poly};

/// A graded derivation `Σ c_z ∂/∂z` with coefficients on the left.
///
/// Only coordinates carry coefficients; Laurent generators are reached
/// through the chain rule of [`Poly::partial_at`].
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    chart: Chart,
    parity: Parity,
    coeffs: Vec<Poly>,
}

impl Derivation {
    pub fn zero(chart: &Chart, parity: Parity) -> Derivation {
        Derivation {
            chart: chart.clone(),
            parity,
            coeffs: vec![Poly::zero(chart); chart.len()],
        }
    }

    /// Builds a derivation from `(variable, coefficient)` pairs, checking
    /// that each nonzero coefficient has parity `parity + parity(z)`.
    pub fn new(chart: &Chart, parity: Parity, entries: Vec<(&str, Poly)>) -> Result<Derivation> {
        let mut d = Derivation::zero(chart, parity);
        for (name, c) in entries {
            let i = chart.index_of(name)?;
            d.set(i, c)?;
        }
        Ok(d)
    }

    pub fn set(&mut self, i: usize, c: Poly) -> Result<()> {
        self.chart.ensure_same(c.chart())?;
        let var = self.chart.var(i);
        if !self.chart.is_coordinate(i) && !c.is_zero() {
            return Err(Error::Shape(format!(
                "`{}` is not a coordinate and cannot carry a derivation coefficient",
                var.name
            )));
        }
        let want = self.parity + var.parity;
        if !c.parity_of().admits(want) {
            return Err(Error::ParityMismatch {
                name: format!("coefficient of d/d{}", var.name),
                expected: want,
                found: c.parity_of().to_string(),
            });
        }
        self.coeffs[i] = c;
        Ok(())
    }

    /// ∂/∂z.
    pub fn partial(chart: &Chart, name: &str) -> Result<Derivation> {
        let i = chart.index_of(name)?;
        let parity = chart.var(i).parity;
        let mut d = Derivation::zero(chart, parity);
        d.set(i, Poly::one(chart))?;
        Ok(d)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn coeff(&self, i: usize) -> &Poly {
        &self.coeffs[i]
    }

    pub fn coeff_of(&self, name: &str) -> Result<&Poly> {
        Ok(&self.coeffs[self.chart.index_of(name)?])
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// `D(f) = Σ c_z · ∂f/∂z`.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        self.chart.ensure_same(f.chart())?;
        let mut out = Poly::zero(&self.chart);
        for i in self.chart.coordinates() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let d = f.partial_at(i);
            if !d.is_zero() {
                out += &(c * &d);
            }
        }
        Ok(out)
    }

    /// Left multiplication `f·D`.
    pub fn left_mul(&self, f: &Poly) -> Result<Derivation> {
        self.chart.ensure_same(f.chart())?;
        let parity = match f.parity_of().exact() {
            Some(p) => p + self.parity,
            None if f.is_zero() => self.parity,
            None => {
                return Err(Error::ParityMismatch {
                    name: "multiplier".into(),
                    expected: Parity::Even,
                    found: "inhomogeneous".into(),
                })
            }
        };
        Ok(Derivation {
            chart: self.chart.clone(),
            parity,
            coeffs: self.coeffs.iter().map(|c| f * c).collect(),
        })
    }

    pub fn try_add(&self, other: &Derivation) -> Result<Derivation> {
        self.chart.ensure_same(&other.chart)?;
        if self.parity != other.parity && !self.is_zero() && !other.is_zero() {
            return Err(Error::ParityMismatch {
                name: "derivation sum".into(),
                expected: self.parity,
                found: other.parity.to_string(),
            });
        }
        let parity = if self.is_zero() { other.parity } else { self.parity };
        Ok(Derivation {
            chart: self.chart.clone(),
            parity,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Derivation) -> Result<Derivation> {
        self.try_add(&other.scale_int(-1))
    }

    pub fn scale_int(&self, n: i64) -> Derivation {
        Derivation {
            chart: self.chart.clone(),
            parity: self.parity,
            coeffs: self.coeffs.iter().map(|c| c.scale(&rat(n))).collect(),
        }
    }

    pub fn scale(&self, c: &crate::kernel::Rational) -> Derivation {
        Derivation {
            chart: self.chart.clone(),
            parity: self.parity,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Graded commutator `[D1, D2] = D1∘D2 − (−1)^(D̃1·D̃2) D2∘D1`.
    ///
    /// The coefficients come from `[D1,D2](z) = D1(c2_z) − ± D2(c1_z)`; the
    /// second-order parts of the operator composition are then checked to
    /// cancel on every product of two generators.
    pub fn commutator(&self, other: &Derivation) -> Result<Derivation> {
        self.chart.ensure_same(&other.chart)?;
        let sign = self.parity.koszul(other.parity);
        let parity = self.parity + other.parity;
        let mut out = Derivation::zero(&self.chart, parity);
        for i in self.chart.coordinates() {
            let a = self.apply(&other.coeffs[i])?;
            let b = other.apply(&self.coeffs[i])?;
            let c = if sign < 0 { &a + &b } else { &a - &b };
            out.set(i, c)?;
        }
        self.check_first_order(other, sign, &out)?;
        Ok(out)
    }

    fn check_first_order(&self, other: &Derivation, sign: i32, result: &Derivation) -> Result<()> {
        let coords: Vec<usize> = self.chart.coordinates().collect();
        for (k, &i) in coords.iter().enumerate() {
            for &j in &coords[k..] {
                let zi = Poly::var_at(&self.chart, i);
                let zj = Poly::var_at(&self.chart, j);
                let f = &zi * &zj;
                if f.is_zero() {
                    continue;
                }
                let d12 = self.apply(&other.apply(&f)?)?;
                let d21 = other.apply(&self.apply(&f)?)?;
                let composed = if sign < 0 { &d12 + &d21 } else { &d12 - &d21 };
                if composed != result.apply(&f)? {
                    return Err(Error::Internal(format!(
                        "commutator is not first order on {}",
                        f
                    )));
                }
            }
        }
        Ok(())
    }

    /// The same derivation read on another chart, matching variables by name.
    pub fn transfer(&self, target: &Chart) -> Result<Derivation> {
        let mut out = Derivation::zero(target, self.parity);
        for i in self.chart.coordinates() {
            let c = &self.coeffs[i];
            let name = &self.chart.var(i).name;
            let j = target.index_of(name)?;
            out.set(j, c.transfer(target)?)?;
        }
        Ok(out)
    }
}

/// Euler vector field `E = Σ w(z)·z·∂/∂z`.
pub fn euler_field(chart: &Chart) -> Derivation {
    let mut e = Derivation::zero(chart, Parity::Even);
    for i in chart.coordinates() {
        let w = chart.var(i).weight;
        if w != 0 {
            e.set(i, Poly::var_at(chart, i).scale_int(w))
                .expect("Euler coefficient has the parity of its variable");
        }
    }
    e
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})*d/d{}", self.chart.var(i).name)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Derivation[{}]({self})", self.parity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Variable;

    fn chart() -> Chart {
        Chart::new(vec![
            Variable::even("x", 0),
            Variable::odd("xi", 1),
            Variable::odd("eta", 1),
        ])
        .unwrap()
    }

    #[test]
    fn euler_counts_weight() {
        let c = chart();
        let e = euler_field(&c);
        let xi = Poly::var(&c, "xi").unwrap();
        let eta = Poly::var(&c, "eta").unwrap();
        let x = Poly::var(&c, "x").unwrap();
        assert_eq!(e.apply(&xi).unwrap(), xi);
        assert!(e.apply(&x).unwrap().is_zero());
        let f = &xi * &eta;
        assert_eq!(e.apply(&f).unwrap(), f.scale_int(2));
    }

    #[test]
    fn commutator_of_even_partials_vanishes() {
        let c = chart();
        let dx = Derivation::partial(&c, "x").unwrap();
        assert!(dx.commutator(&dx).unwrap().is_zero());
    }

    #[test]
    fn coefficient_parity_is_checked() {
        let c = chart();
        let x = Poly::var(&c, "x").unwrap();
        // odd derivation with an even coefficient on the even variable x
        assert!(Derivation::new(&c, Parity::Odd, vec![("x", x)]).is_err());
    }

    #[test]
    fn euler_commutator_with_weight_one_field() {
        let c = chart();
        let xi = Poly::var(&c, "xi").unwrap();
        let eta = Poly::var(&c, "eta").unwrap();
        let d = Derivation::new(&c, Parity::Odd, vec![("x", xi.clone()), ("eta", &eta * &xi)])
            .unwrap();
        let e = euler_field(&c);
        assert_eq!(e.commutator(&d).unwrap(), d);
    }
}
