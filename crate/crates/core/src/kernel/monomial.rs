use std::cmp::Ordering;

use crate::kernel::{Chart, Parity};

/// A supercommutative word in normal form: one exponent per chart variable.
///
/// Odd variables carry exponent 0 or 1 and are read in chart order; even
/// variables commute with everything so their position is irrelevant.
/// Only Laurent generators may carry negative exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[i32]>,
}

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial {
            exps: vec![0; len].into_boxed_slice(),
        }
    }

    pub fn var(len: usize, i: usize) -> Self {
        let mut m = Monomial::one(len);
        m.exps[i] = 1;
        m
    }

    pub(crate) fn from_exps(exps: Vec<i32>) -> Self {
        Monomial {
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn exps(&self) -> &[i32] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> i32 {
        self.exps[i]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> i64 {
        self.exps.iter().map(|&e| e.unsigned_abs() as i64).sum()
    }

    pub fn parity(&self, chart: &Chart) -> Parity {
        let odd = self
            .exps
            .iter()
            .enumerate()
            .filter(|(i, &e)| e != 0 && chart.var(*i).parity.is_odd())
            .count();
        Parity::from_bit((odd % 2) as u8)
    }

    pub fn weight(&self, chart: &Chart) -> i64 {
        self.exps
            .iter()
            .enumerate()
            .map(|(i, &e)| chart.var(i).weight * e as i64)
            .sum()
    }

    /// Product in normal form with its Koszul sign, or `None` when an odd
    /// factor repeats.
    pub fn mul(&self, other: &Monomial, chart: &Chart) -> Option<(Monomial, bool)> {
        let n = self.exps.len();
        let mut exps = Vec::with_capacity(n);
        let mut negative = false;
        // odd factors of `self` strictly after the current index
        let mut odd_after: usize = (0..n)
            .filter(|&i| self.exps[i] != 0 && chart.var(i).parity.is_odd())
            .count();
        for i in 0..n {
            let odd = chart.var(i).parity.is_odd();
            if odd {
                let a = self.exps[i];
                let b = other.exps[i];
                if a != 0 {
                    odd_after -= 1;
                }
                if a != 0 && b != 0 {
                    return None;
                }
                if b != 0 && odd_after % 2 == 1 {
                    negative = !negative;
                }
                exps.push(a + b);
            } else {
                exps.push(self.exps[i] + other.exps[i]);
            }
        }
        Some((Monomial::from_exps(exps), negative))
    }

    /// Number of odd factors strictly before position `i`.
    pub fn odd_before(&self, i: usize, chart: &Chart) -> usize {
        (0..i)
            .filter(|&j| self.exps[j] != 0 && chart.var(j).parity.is_odd())
            .count()
    }

    pub(crate) fn with_exp(&self, i: usize, e: i32) -> Monomial {
        let mut exps = self.exps.to_vec();
        exps[i] = e;
        Monomial::from_exps(exps)
    }
}

impl Ord for Monomial {
    /// Graded order: lower total degree first, then higher exponents of
    /// earlier variables first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Variable;

    fn chart() -> Chart {
        Chart::new(vec![
            Variable::even("x", 0),
            Variable::odd("a", 1),
            Variable::odd("b", 1),
            Variable::odd("c", 1),
        ])
        .unwrap()
    }

    #[test]
    fn odd_reordering_sign() {
        let c = chart();
        let a = Monomial::var(4, 1);
        let b = Monomial::var(4, 2);
        let (ab, neg) = a.mul(&b, &c).unwrap();
        assert!(!neg);
        let (ba, neg2) = b.mul(&a, &c).unwrap();
        assert!(neg2);
        assert_eq!(ab, ba);
        assert!(a.mul(&a, &c).is_none());
    }

    #[test]
    fn three_factor_sign() {
        // (c)(a b) = c a b -> a b c needs two transpositions
        let c = chart();
        let ab = Monomial::from_exps(vec![0, 1, 1, 0]);
        let cc = Monomial::var(4, 3);
        let (_, neg) = cc.mul(&ab, &c).unwrap();
        assert!(!neg);
        // (b c)(a) -> a b c needs two transpositions
        let bc = Monomial::from_exps(vec![0, 0, 1, 1]);
        let a = Monomial::var(4, 1);
        let (_, neg) = bc.mul(&a, &c).unwrap();
        assert!(!neg);
        // (c)(b) -> b c one transposition
        let (_, neg) = cc.mul(&Monomial::var(4, 2), &c).unwrap();
        assert!(neg);
    }

    #[test]
    fn ordering_is_graded() {
        let one = Monomial::one(4);
        let x = Monomial::var(4, 0);
        let a = Monomial::var(4, 1);
        assert!(one < x);
        assert!(x < a);
    }
}
