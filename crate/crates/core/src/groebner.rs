//! Division by marked binomials and Buchberger's S-pair criterion.
//!
//! This is a verifier, not a general Gröbner engine: the basis is taken as
//! given and never completed or autoreduced.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::polyring::{MarkedBinomial, Monomial, Polynomial, TermOrder};
use crate::{IntPoly, Integer, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error("marked lead of {0} is not its leading term under the chosen order")]
    Marking(String),
}

/// A list of marked binomials whose markings agree with a term order, kept in
/// sorted order so that every choice made during division is deterministic.
#[derive(Debug, Clone)]
pub struct MarkedBasis {
    elements: Vec<MarkedBinomial>,
    ord: TermOrder,
    by_lead: HashMap<Monomial, usize>,
    lead_degrees: BTreeSet<u32>,
}

impl MarkedBasis {
    pub fn new(elements: impl IntoIterator<Item = MarkedBinomial>, ord: TermOrder) -> Result<Self, GroebnerError> {
        let mut elements: Vec<MarkedBinomial> = elements.into_iter().collect();
        if let Some(bad) = elements.iter().find(|b| !b.is_marked_by(&ord)) {
            return Err(GroebnerError::Marking(bad.to_string()));
        }
        elements.sort();
        elements.dedup();
        let mut by_lead = HashMap::new();
        for (i, b) in elements.iter().enumerate() {
            by_lead.entry(b.lead().clone()).or_insert(i);
        }
        let lead_degrees = elements.iter().map(MarkedBinomial::degree).collect();
        Ok(MarkedBasis { elements, ord, by_lead, lead_degrees })
    }

    pub fn elements(&self) -> &[MarkedBinomial] {
        &self.elements
    }

    pub fn order(&self) -> &TermOrder {
        &self.ord
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The first basis element (in sorted order) whose lead divides `m`.
    pub fn divisor_of(&self, m: &Monomial) -> Option<&MarkedBinomial> {
        if self.elements.is_empty() {
            return None;
        }
        let mut best: Option<usize> = None;
        for d in m.divisors() {
            if !self.lead_degrees.contains(&d.degree()) {
                continue;
            }
            if let Some(&i) = self.by_lead.get(&d) {
                best = Some(best.map_or(i, |b| b.min(i)));
            }
        }
        best.map(|i| &self.elements[i])
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        self.divisor_of(m).is_none()
    }
}

/// Normal form of `p`: repeatedly rewrites the largest term divisible by a
/// basis lead, `u·lead ↦ u·trail`.
pub fn reduce<C: Scalar>(p: &Polynomial<C>, basis: &MarkedBasis) -> Polynomial<C> {
    let mut p = p.clone();
    loop {
        let target = p
            .terms()
            .filter_map(|(m, c)| basis.divisor_of(m).map(|b| (m, c, b)))
            .max_by(|x, y| basis.ord.compare(x.0, y.0));
        let Some((m, c, b)) = target else {
            return p;
        };
        let u = m.div(b.lead()).expect("lead divides the term");
        let (m, c) = (m.clone(), c.clone());
        p.add_term(m, -c.clone());
        p.add_term(u.mul(b.trail()), c);
    }
}

/// `(L/lead_f)·f − (L/lead_g)·g` with `L = lcm(lead_f, lead_g)`.
pub fn s_polynomial<C: Scalar>(f: &MarkedBinomial, g: &MarkedBinomial) -> Polynomial<C> {
    let l = f.lead().lcm(g.lead());
    let uf = l.div(f.lead()).expect("lcm is a multiple");
    let ug = l.div(g.lead()).expect("lcm is a multiple");
    Polynomial::from_terms([(uf.mul(f.trail()), -C::one()), (ug.mul(g.trail()), C::one())])
}

#[derive(Debug, Clone, Serialize)]
pub struct SPairFailure {
    pub f: MarkedBinomial,
    pub g: MarkedBinomial,
    pub normal_form: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BuchbergerReport {
    pub passed: bool,
    pub pairs_reduced: usize,
    pub pairs_coprime: usize,
    pub failure: Option<SPairFailure>,
}

/// Checks that every S-pair reduces to zero, skipping pairs with coprime
/// leads. On failure reports the first failing pair in sorted order.
pub fn buchberger_check(basis: &MarkedBasis) -> BuchbergerReport {
    let e = basis.elements();
    let pairs: Vec<(usize, usize)> = (0..e.len()).flat_map(|i| (i + 1..e.len()).map(move |j| (i, j))).collect();
    let (coprime, reducing): (Vec<_>, Vec<_>) =
        pairs.into_iter().partition(|&(i, j)| e[i].lead().is_coprime(e[j].lead()));
    let failure = reducing.par_iter().find_map_first(|&(i, j)| {
        let nf = reduce(&s_polynomial::<Integer>(&e[i], &e[j]), basis);
        (!nf.is_zero()).then(|| SPairFailure { f: e[i].clone(), g: e[j].clone(), normal_form: nf.to_string() })
    });
    BuchbergerReport { passed: failure.is_none(), pairs_reduced: reducing.len(), pairs_coprime: coprime.len(), failure }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InitialIdealProfile {
    pub all_leads_degree_2: bool,
    pub all_leads_squarefree: bool,
    pub leads: Vec<String>,
}

pub fn initial_ideal_profile(basis: &[MarkedBinomial]) -> InitialIdealProfile {
    InitialIdealProfile {
        all_leads_degree_2: basis.iter().all(|b| b.lead().degree() == 2),
        all_leads_squarefree: basis.iter().all(|b| b.lead().is_squarefree()),
        leads: basis.iter().map(|b| b.lead().to_string()).collect(),
    }
}

/// `f` reduced modulo `basis`, as an integer polynomial.
pub fn normal_form(f: &MarkedBinomial, basis: &MarkedBasis) -> IntPoly {
    reduce(&f.to_poly::<Integer>(), basis)
}
