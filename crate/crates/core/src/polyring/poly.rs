use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use super::{Monomial, TermOrder, Var};
use crate::Scalar;

/// A polynomial as a sparse map from monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Default for Polynomial<C> {
    fn default() -> Self {
        Polynomial::zero()
    }
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Polynomial::term(c, Monomial::one())
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        Polynomial::term(C::one(), m)
    }

    pub fn var(v: Var) -> Self {
        Polynomial::monomial(Monomial::var(v))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * m` in place, keeping the no-zero-coefficient invariant.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// The largest monomial in the storage order, which is not a term order.
    pub fn last_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.last_key_value()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Terms sorted from largest to smallest under `ord`.
    pub fn sorted_terms(&self, ord: &TermOrder) -> Vec<(&Monomial, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.compare(b.0, a.0));
        v
    }

    pub fn leading_term(&self, ord: &TermOrder) -> Option<(&Monomial, &C)> {
        self.terms.iter().max_by(|a, b| ord.compare(a.0, b.0))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.support().cloned()).collect()
    }

    pub fn scale(&self, c: &C) -> Self {
        Polynomial::from_terms(self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())))
    }

    pub fn mul_term(&self, c: &C, m: &Monomial) -> Self {
        Polynomial::from_terms(self.terms.iter().map(|(n, a)| (n.mul(m), a.clone() * c.clone())))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Polynomial::one(), |acc, _| &acc * self)
    }

    /// Substitutes `1` for every variable selected by `drop`.
    pub fn specialize_ones(&self, drop: impl Fn(&Var) -> bool) -> Self {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.specialize_ones(&drop), c.clone())))
    }

    /// Renames variables; distinct variables may collapse to one.
    pub fn rename(&self, f: impl Fn(&Var) -> Var) -> Self {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.rename(&f), c.clone())))
    }

    pub fn map_coefficients<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Evaluates at a point, with coefficients embedded by `coef` and
    /// variables sent to `value`.
    pub fn eval<S: Scalar>(&self, coef: impl Fn(&C) -> S, value: impl Fn(&Var) -> S) -> S {
        let mut cache: BTreeMap<&Var, S> = BTreeMap::new();
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = coef(c);
            for (v, e) in m.factors() {
                let x = cache.entry(v).or_insert_with(|| value(v)).clone();
                for _ in 0..*e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }
}

impl<C: Scalar> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: Self) -> Polynomial<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Scalar> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Self) -> Polynomial<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Scalar> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Self) -> Polynomial<C> {
        let mut out = Polynomial::zero();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m.mul(n), a.clone() * b.clone());
            }
        }
        out
    }
}

impl<C: Scalar> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<C: Scalar> $tr for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $f(self, rhs: Self) -> Polynomial<C> {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Scalar> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

impl<C: Scalar> std::iter::Sum for Polynomial<C> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Polynomial::zero(), |a, b| &a + &b)
    }
}

impl<C: Scalar + Signed> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render(self, &TermOrder::PathLex))
    }
}

impl<C: Scalar> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m}")).collect();
        f.write_str(&terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = Polynomial<BigInt>;

    fn l(s: &str) -> P {
        P::var(Var::label(s).unwrap())
    }

    #[test]
    fn product_of_two_sums_expands() {
        let p = &(&l("s10") + &l("s11")) * &(&l("s12") + &l("s13"));
        assert_eq!(p.to_string(), "s10*s12 + s10*s13 + s11*s12 + s11*s13");
        assert_eq!(&p * &P::one(), p);
        assert!((&(&l("s6") + &l("s7")) * &P::zero()).is_zero());
    }

    #[test]
    fn specialization_collapses_terms() {
        let t = &(&l("s6") * &(&l("s10") + &l("s11"))) + &(&l("s7") * &(&l("s12") + &l("s13")));
        let drop = ["s10", "s11", "s12", "s13"].map(|s| Var::label(s).unwrap());
        let s = t.specialize_ones(|v| drop.contains(v));
        let two = BigInt::from(2);
        assert_eq!(s, &l("s6").scale(&two) + &l("s7").scale(&two));
        assert_eq!(t.specialize_ones(|_| false), t);
    }

    #[test]
    fn evaluation_is_exact() {
        let p = &(&l("x") * &l("x")) - &P::constant(BigInt::from(3));
        let v = p.eval(|c| c.clone(), |_| BigInt::from(5));
        assert_eq!(v, BigInt::from(22));
    }
}
