use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{Monomial, PolyError, Polynomial, TermOrder};
use crate::Scalar;

/// A pure binomial `lead - trail` with a designated leading term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedBinomial {
    lead: Monomial,
    trail: Monomial,
}

impl MarkedBinomial {
    pub fn new(lead: Monomial, trail: Monomial) -> Result<Self, PolyError> {
        if lead == trail {
            return Err(PolyError::DegenerateBinomial(lead.to_string()));
        }
        if lead.degree() != trail.degree() {
            return Err(PolyError::DegreeMismatch { lead: lead.to_string(), trail: trail.to_string() });
        }
        Ok(MarkedBinomial { lead, trail })
    }

    /// Marks whichever term `ord` ranks higher.
    pub fn ordered(a: Monomial, b: Monomial, ord: &TermOrder) -> Result<Self, PolyError> {
        if ord.compare(&a, &b) == Ordering::Less {
            MarkedBinomial::new(b, a)
        } else {
            MarkedBinomial::new(a, b)
        }
    }

    pub fn lead(&self) -> &Monomial {
        &self.lead
    }

    pub fn trail(&self) -> &Monomial {
        &self.trail
    }

    pub fn degree(&self) -> u32 {
        self.lead.degree()
    }

    /// Whether the marking agrees with the leading term under `ord`.
    pub fn is_marked_by(&self, ord: &TermOrder) -> bool {
        ord.compare(&self.lead, &self.trail) == Ordering::Greater
    }

    pub fn is_squarefree(&self) -> bool {
        self.lead.is_squarefree() && self.trail.is_squarefree()
    }

    pub fn to_poly<C: Scalar>(&self) -> Polynomial<C> {
        Polynomial::from_terms([(self.lead.clone(), C::one()), (self.trail.clone(), -C::one())])
    }

    pub fn rename(&self, f: impl Fn(&super::Var) -> super::Var) -> Result<Self, PolyError> {
        MarkedBinomial::new(self.lead.rename(&f), self.trail.rename(&f))
    }
}

impl fmt::Display for MarkedBinomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - {}", self.lead, self.trail)
    }
}

impl fmt::Debug for MarkedBinomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for MarkedBinomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
