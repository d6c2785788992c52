use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{Chart, Monomial, Poly, Rational};

/// A simultaneous substitution (pullback) from functions on `domain` to
/// functions on `codomain`. Unmapped variables go to the variable of the same
/// name in the codomain.
#[derive(Clone, PartialEq, Eq)]
pub struct Substitution {
    domain: Chart,
    codomain: Chart,
    images: Vec<Poly>,
}

impl Substitution {
    /// `graded` additionally requires each image to have the weight of its variable.
    pub fn new(
        domain: &Chart,
        codomain: &Chart,
        entries: Vec<(&str, Poly)>,
        graded: bool,
    ) -> Result<Substitution> {
        let mut images: Vec<Option<Poly>> = vec![None; domain.len()];
        for (name, img) in entries {
            let i = domain.index_of(name)?;
            codomain.ensure_same(img.chart())?;
            images[i] = Some(img);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| match img {
                Some(p) => Ok(p),
                None => Poly::var(codomain, &domain.var(i).name),
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, img) in images.iter().enumerate() {
            let v = domain.var(i);
            if !img.parity_of().admits(v.parity) {
                return Err(Error::ParityMismatch {
                    name: v.name.clone(),
                    expected: v.parity,
                    found: img.parity_of().to_string(),
                });
            }
            if graded && !img.weight_of().admits(v.weight) {
                return Err(Error::WeightMismatch {
                    name: v.name.clone(),
                    expected: v.weight,
                    found: img.weight_of().to_string(),
                });
            }
        }
        Ok(Substitution {
            domain: domain.clone(),
            codomain: codomain.clone(),
            images,
        })
    }

    /// Maps every variable to its namesake in `codomain`.
    pub fn identity(domain: &Chart, codomain: &Chart) -> Result<Substitution> {
        Substitution::new(domain, codomain, Vec::new(), false)
    }

    pub fn domain(&self) -> &Chart {
        &self.domain
    }

    pub fn codomain(&self) -> &Chart {
        &self.codomain
    }

    pub fn image(&self, name: &str) -> Result<&Poly> {
        Ok(&self.images[self.domain.index_of(name)?])
    }

    pub fn image_at(&self, i: usize) -> &Poly {
        &self.images[i]
    }

    /// Pulls `f` back along the substitution and normalizes.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        self.domain.ensure_same(f.chart())?;
        let mut out = Poly::zero(&self.codomain);
        for (m, c) in f.terms() {
            let mut term = Poly::constant(&self.codomain, c.clone());
            // odd factors are multiplied in chart order, so the normal-form word is preserved
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = if e > 0 {
                    self.images[i].pow(e as u32)
                } else {
                    invert_laurent(&self.images[i], &self.domain.var(i).name)?.pow((-e) as u32)
                };
                term = &term * &factor;
                if term.is_zero() {
                    break;
                }
            }
            out += &term;
        }
        Ok(out)
    }

    /// `self` followed by `next`: functions on `self.domain` pulled back to `next.codomain`.
    pub fn then(&self, next: &Substitution) -> Result<Substitution> {
        self.codomain.ensure_same(&next.domain)?;
        let images = self
            .images
            .iter()
            .map(|p| next.apply(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Substitution {
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
            images,
        })
    }
}

/// Inverse of a single-term image built from Laurent generators.
fn invert_laurent(p: &Poly, name: &str) -> Result<Poly> {
    let chart = p.chart();
    if p.len() != 1 {
        return Err(Error::NegativeExponent(name.to_string()));
    }
    let (m, c) = p.terms().next().unwrap();
    if c.is_zero() {
        return Err(Error::NegativeExponent(name.to_string()));
    }
    let mut exps = Vec::with_capacity(chart.len());
    for (i, &e) in m.exps().iter().enumerate() {
        if e != 0 && !chart.is_laurent(i) {
            return Err(Error::NegativeExponent(name.to_string()));
        }
        exps.push(-e);
    }
    Ok(Poly::monomial(
        chart,
        Monomial::from_exps(exps),
        Rational::one() / c.clone(),
    ))
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Substitution{")?;
        let mut first = true;
        for (i, img) in self.images.iter().enumerate() {
            let name = &self.domain.var(i).name;
            if self.codomain.contains(name) && Poly::var(&self.codomain, name).as_ref() == Ok(img) {
                continue;
            }
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{name} -> {img}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Parity, Variable};

    #[test]
    fn renaming_odd_to_odd() {
        let dom = Chart::new(vec![Variable::odd("pi", -1), Variable::odd("theta", 1)]).unwrap();
        let cod = Chart::new(vec![Variable::odd("eta", -1), Variable::odd("theta", 1)]).unwrap();
        let eta = Poly::var(&cod, "eta").unwrap();
        let s = Substitution::new(&dom, &cod, vec![("pi", eta.clone())], true).unwrap();
        let f = &Poly::var(&dom, "pi").unwrap() * &Poly::var(&dom, "theta").unwrap();
        let expect = &eta * &Poly::var(&cod, "theta").unwrap();
        assert_eq!(s.apply(&f).unwrap(), expect);
    }

    #[test]
    fn parity_mismatch_rejected() {
        let c = Chart::new(vec![Variable::even("x", 0), Variable::odd("th", 0)]).unwrap();
        let th = Poly::var(&c, "th").unwrap();
        let err = Substitution::new(&c, &c, vec![("x", th)], false).unwrap_err();
        assert!(matches!(err, Error::ParityMismatch { expected: Parity::Even, .. }));
    }

    #[test]
    fn weight_checked_only_in_graded_mode() {
        let c = Chart::new(vec![Variable::even("x", 0), Variable::even("y", 1)]).unwrap();
        let y = Poly::var(&c, "y").unwrap();
        assert!(Substitution::new(&c, &c, vec![("x", y.clone())], false).is_ok());
        assert!(matches!(
            Substitution::new(&c, &c, vec![("x", y)], true).unwrap_err(),
            Error::WeightMismatch { .. }
        ));
    }

    #[test]
    fn reordering_odd_images_carries_sign() {
        // a -> b, b -> a swaps two odd variables: a*b -> b*a = -a*b
        let c = Chart::new(vec![Variable::odd("a", 0), Variable::odd("b", 0)]).unwrap();
        let a = Poly::var(&c, "a").unwrap();
        let b = Poly::var(&c, "b").unwrap();
        let s = Substitution::new(&c, &c, vec![("a", b.clone()), ("b", a.clone())], false).unwrap();
        assert_eq!(s.apply(&(&a * &b)).unwrap(), -(&a * &b));
    }
}
