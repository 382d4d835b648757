//! Brute-force description of the toric ideal in one degree.
//!
//! Two monomials of degree `d` differ by a kernel element exactly when they
//! have the same image, so grouping all of them by image (the fibers) gives a
//! spanning set of the degree-`d` part of the kernel.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::groebner::{reduce, MarkedBasis};
use crate::polyring::{MarkedBinomial, Monomial, TermOrder, Var};
use crate::tfp::MonomialMap;
use crate::{IntPoly, Integer, RatPoly, Rational};

/// Largest number of monomials the oracle will enumerate in one degree.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{count} monomials of degree {degree} in {vars} variables exceeds the limit of {ENUMERATION_LIMIT}")]
    TooLarge { vars: usize, degree: u32, count: u128 },
}

pub fn monomial_count(vars: usize, degree: u32) -> u128 {
    // C(n + d - 1, d), computed incrementally; each prefix is itself binomial.
    let n = vars as u128;
    if n == 0 {
        return u128::from(degree == 0);
    }
    let mut c: u128 = 1;
    for i in 1..=degree as u128 {
        c = c.saturating_mul(n + i - 1) / i;
    }
    c
}

fn guard(vars: usize, degree: u32) -> Result<(), OracleError> {
    let count = monomial_count(vars, degree);
    if count > ENUMERATION_LIMIT {
        return Err(OracleError::TooLarge { vars, degree, count });
    }
    Ok(())
}

/// Every multiset of size `d` from `0..n`, as nondecreasing index vectors.
fn multisets(n: usize, d: u32) -> impl Iterator<Item = Vec<usize>> {
    let d = d as usize;
    let mut next = if n == 0 && d > 0 { None } else { Some(vec![0; d]) };
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        let mut i = d;
        while i > 0 && succ[i - 1] == n - 1 {
            i -= 1;
        }
        if i > 0 {
            let v = succ[i - 1] + 1;
            for x in &mut succ[i - 1..] {
                *x = v;
            }
            next = Some(succ);
        }
        Some(cur)
    })
}

pub fn degree_monomials(vars: &[Var], d: u32) -> Result<Vec<Monomial>, OracleError> {
    guard(vars.len(), d)?;
    Ok(multisets(vars.len(), d).map(|ix| Monomial::from_vars(ix.into_iter().map(|i| vars[i].clone()))).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub image: Monomial,
    /// Members in ascending path_lex order; the first is the representative.
    pub members: Vec<Monomial>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberPartition {
    pub degree: u32,
    pub fibers: Vec<Fiber>,
}

pub fn fiber_partition(map: &MonomialMap, d: u32) -> Result<FiberPartition, OracleError> {
    let n = map.len();
    guard(n, d)?;
    let targets = map.targets();
    let column: BTreeMap<&Var, usize> = targets.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let dense: Vec<Vec<u16>> = map
        .images()
        .iter()
        .map(|m| {
            let mut row = vec![0u16; targets.len()];
            for (v, e) in m.factors() {
                row[column[v]] += *e as u16;
            }
            row
        })
        .collect();
    let mut groups: HashMap<Vec<u16>, Vec<Vec<usize>>> = HashMap::new();
    for ix in multisets(n, d) {
        let mut key = vec![0u16; targets.len()];
        for &i in &ix {
            for (k, e) in key.iter_mut().zip(&dense[i]) {
                *k += e;
            }
        }
        groups.entry(key).or_default().push(ix);
    }
    let vars = map.variables();
    let ord = TermOrder::PathLex;
    let mut fibers: Vec<Fiber> = groups
        .into_iter()
        .map(|(key, members)| {
            let image = Monomial::from_pairs(targets.iter().cloned().zip(key.into_iter().map(u32::from)));
            let mut members: Vec<Monomial> =
                members.into_iter().map(|ix| Monomial::from_vars(ix.into_iter().map(|i| vars[i].clone()))).collect();
            members.sort_by(|a, b| ord.compare(a, b));
            Fiber { image, members }
        })
        .collect();
    fibers.sort_by(|a, b| a.image.cmp(&b.image));
    Ok(FiberPartition { degree: d, fibers })
}

impl FiberPartition {
    pub fn fiber_count(&self) -> usize {
        self.fibers.len()
    }

    pub fn monomial_count(&self) -> usize {
        self.fibers.iter().map(|f| f.members.len()).sum()
    }

    pub fn fiber_of(&self, m: &Monomial) -> Option<&Fiber> {
        self.fibers.iter().find(|f| f.members.contains(m))
    }

    pub fn non_singleton(&self) -> impl Iterator<Item = &Fiber> {
        self.fibers.iter().filter(|f| f.members.len() > 1)
    }
}

/// Each fiber member minus the fiber's path_lex-smallest member, marked with
/// the member as lead.
pub fn kernel_binomials(fp: &FiberPartition) -> Vec<MarkedBinomial> {
    fp.fibers
        .iter()
        .flat_map(|f| {
            let rep = &f.members[0];
            f.members[1..]
                .iter()
                .map(move |m| MarkedBinomial::new(m.clone(), rep.clone()).expect("fiber members are distinct"))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverReport {
    pub degree: u32,
    pub covered: bool,
    pub kernel_binomials: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub binomial: MarkedBinomial,
    pub normal_form: String,
}

/// Whether every kernel binomial of the partition reduces to zero modulo
/// `basis`. Meaningful as an ideal-membership test when `basis` is a Gröbner
/// basis.
pub fn kernel_covered_by(fp: &FiberPartition, basis: &MarkedBasis) -> CoverReport {
    let kernel = kernel_binomials(fp);
    let counterexample = kernel.par_iter().find_map_first(|b| {
        let nf = reduce(&b.to_poly::<Integer>(), basis);
        (!nf.is_zero()).then(|| Counterexample { binomial: b.clone(), normal_form: nf.to_string() })
    });
    CoverReport { degree: fp.degree, covered: counterexample.is_none(), kernel_binomials: kernel.len(), counterexample }
}

/// Degree-`d` monomials in `vars` divisible by no lead of `basis`.
pub fn standard_monomial_count(basis: &MarkedBasis, vars: &[Var], d: u32) -> Result<usize, OracleError> {
    guard(vars.len(), d)?;
    Ok(multisets(vars.len(), d)
        .par_bridge()
        .filter(|ix| basis.is_standard(&Monomial::from_vars(ix.iter().map(|&i| vars[i].clone()))))
        .count())
}

pub fn fiber_count(fp: &FiberPartition) -> usize {
    fp.fiber_count()
}

/// An exact rational row echelon form, grown one vector at a time.
#[derive(Debug, Clone, Default)]
pub struct Span {
    pivots: HashMap<Monomial, RatPoly>,
}

impl Span {
    pub fn new() -> Self {
        Span::default()
    }

    pub fn from_polys<'a>(polys: impl IntoIterator<Item = &'a IntPoly>) -> Self {
        let mut s = Span::new();
        for p in polys {
            s.insert(p);
        }
        s
    }

    pub fn from_binomials<'a>(bs: impl IntoIterator<Item = &'a MarkedBinomial>) -> Self {
        let mut s = Span::new();
        for b in bs {
            s.insert(&b.to_poly());
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds `p`; returns whether it was independent of the span so far.
    pub fn insert(&mut self, p: &IntPoly) -> bool {
        let v = self.residue(to_rat(p));
        let Some((m, c)) = v.last_term() else { return false };
        let (m, inv) = (m.clone(), Rational::one() / c.clone());
        self.pivots.insert(m, v.scale(&inv));
        true
    }

    pub fn contains(&self, p: &IntPoly) -> bool {
        self.residue(to_rat(p)).is_zero()
    }

    pub fn same_span(&self, other: &Span) -> bool {
        self.rank() == other.rank() && other.pivots.values().all(|r| self.residue(r.clone()).is_zero())
    }

    /// Eliminates pivots from the top down until the largest remaining
    /// monomial is not a pivot.
    fn residue(&self, mut v: RatPoly) -> RatPoly {
        while let Some((m, c)) = v.last_term() {
            let Some(row) = self.pivots.get(m) else { break };
            let c = c.clone();
            v = &v - &row.scale(&c);
        }
        v
    }
}

fn to_rat(p: &IntPoly) -> RatPoly {
    p.map_coefficients(|c| Rational::from_integer(c.clone()))
}

pub fn same_span(a: &[MarkedBinomial], b: &[MarkedBinomial]) -> bool {
    Span::from_binomials(a).same_span(&Span::from_binomials(b))
}

/// Degree-`d` part of the ideal generated by `gens`, as generator times
/// monomial products, for span comparisons.
pub fn ideal_degree_part(gens: &[IntPoly], vars: &[Var], d: u32) -> Result<Vec<IntPoly>, OracleError> {
    let mut out = Vec::new();
    for g in gens {
        let Some(gd) = g.total_degree() else { continue };
        if gd > d {
            continue;
        }
        for m in degree_monomials(vars, d - gd)? {
            out.push(g.mul_term(&Integer::one(), &m));
        }
    }
    Ok(out)
}

pub fn to_int_poly(b: &MarkedBinomial) -> IntPoly {
    b.to_poly::<Integer>()
}
