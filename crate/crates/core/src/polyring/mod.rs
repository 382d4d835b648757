//! Sparse multivariate polynomials over named indeterminates.
//!
//! Three kinds of variables occur: edge labels of a staged tree, the
//! homogenizing variable `z`, and path variables `p[...]` indexed by leaves.
//! Coefficients are generic over [`crate::Scalar`].

mod binomial;
mod monomial;
mod order;
mod poly;
mod text;
mod var;

pub use binomial::MarkedBinomial;
pub use monomial::Monomial;
pub use order::TermOrder;
pub use poly::Polynomial;
pub use text::{parse_binomial, parse_monomial, parse_polynomial, render};
pub use var::{Label, PathIndex, Var, VarKind};

pub(crate) use var::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("invalid label {0:?}: labels are identifiers other than `z`")]
    InvalidLabel(String),
    #[error("invalid path index {0:?}")]
    InvalidPath(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("binomial has identical terms {0}")]
    DegenerateBinomial(String),
    #[error("binomial terms {lead} and {trail} have different degrees")]
    DegreeMismatch { lead: String, trail: String },
    #[error("not a pure binomial with unit coefficients: {0}")]
    NotBinomial(String),
}
