use std::collections::BTreeMap;
use std::fmt;

use super::Var;

/// A power product of indeterminates.
///
/// Stored sparsely as `(variable, exponent)` pairs sorted by [`Var`], with no
/// zero exponents, so structural equality is monomial equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    factors: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial { factors: vec![(v, 1)] }
    }

    /// Builds a monomial from arbitrary `(var, exponent)` pairs, merging
    /// repeated variables and dropping zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial { factors: map.into_iter().filter(|&(_, e)| e > 0).collect() }
    }

    pub fn from_vars(vars: impl IntoIterator<Item = Var>) -> Self {
        Monomial::from_pairs(vars.into_iter().map(|v| (v, 1)))
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.factors.binary_search_by(|(w, _)| w.cmp(v)).map(|i| self.factors[i].1).unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = &Var> {
        self.factors.iter().map(|(v, _)| v)
    }

    /// Variables repeated according to their exponents.
    pub fn expanded(&self) -> impl Iterator<Item = &Var> {
        self.factors.iter().flat_map(|(v, e)| std::iter::repeat_n(v, *e as usize))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| a + b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.merge(other, u32::max)
    }

    fn merge(&self, other: &Monomial, op: impl Fn(u32, u32) -> u32) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let pick = match (a.get(i), b.get(j)) {
                (Some((x, _)), Some((y, _))) => x.cmp(y),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match pick {
                std::cmp::Ordering::Less => {
                    out.push((a[i].0.clone(), op(a[i].1, 0)));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0.clone(), op(0, b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0.clone(), op(a[i].1, b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.retain(|&(_, e)| e > 0);
        Monomial { factors: out }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.factors.iter().all(|(v, e)| other.exponent(v) >= *e)
    }

    /// `self / divisor`, or `None` when `divisor` does not divide `self`.
    pub fn div(&self, divisor: &Monomial) -> Option<Monomial> {
        if !divisor.divides(self) {
            return None;
        }
        let factors =
            self.factors.iter().map(|(v, e)| (v.clone(), e - divisor.exponent(v))).filter(|&(_, e)| e > 0).collect();
        Some(Monomial { factors })
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.factors.iter().all(|(v, _)| other.exponent(v) == 0)
    }

    /// All monomials dividing `self`, including `1` and `self`.
    pub fn divisors(&self) -> Vec<Monomial> {
        let mut out = vec![Monomial::one()];
        for (v, e) in &self.factors {
            let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
            for m in &out {
                for k in 0..=*e {
                    let mut f = m.factors.clone();
                    if k > 0 {
                        f.push((v.clone(), k));
                    }
                    next.push(Monomial { factors: f });
                }
            }
            out = next;
        }
        out
    }

    /// Sets every variable in `vars` to one.
    pub fn specialize_ones(&self, drop: impl Fn(&Var) -> bool) -> Monomial {
        Monomial { factors: self.factors.iter().filter(|(v, _)| !drop(v)).cloned().collect() }
    }

    /// Applies a variable substitution `v ↦ f(v)`.
    pub fn rename(&self, f: impl Fn(&Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.factors.iter().map(|(v, e)| (f(v), *e)))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> Var {
        Var::label(s).unwrap()
    }

    #[test]
    fn arithmetic_on_sparse_exponents() {
        let a = Monomial::from_pairs([(l("x"), 2), (l("y"), 1)]);
        let b = Monomial::from_pairs([(l("y"), 3), (Var::Homogenizer, 1)]);
        assert_eq!(a.mul(&b).degree(), 7);
        assert_eq!(a.lcm(&b), Monomial::from_pairs([(l("x"), 2), (l("y"), 3), (Var::Homogenizer, 1)]));
        assert!(!a.is_coprime(&b));
        assert_eq!(a.mul(&b).div(&b), Some(a.clone()));
        assert_eq!(a.div(&b), None);
        assert_eq!(Monomial::from_pairs([(l("x"), 0)]), Monomial::one());
    }

    #[test]
    fn divisors_enumerate_all_sub_products() {
        let m = Monomial::from_pairs([(l("x"), 2), (l("y"), 1)]);
        let d = m.divisors();
        assert_eq!(d.len(), 6);
        assert!(d.iter().all(|x| x.divides(&m)));
    }
}
