//! Toric ideals of staged trees.
//!
//! For a balanced stratified staged tree the kernel of the path parameterization
//! `p_λ ↦ z·∏ θ(e)` has a quadratic Gröbner basis with squarefree initial ideal,
//! built by gluing one level at a time as a toric fiber product. This crate
//! constructs that basis ([`tfp::assemble_f`]), verifies it with Buchberger's
//! criterion ([`groebner`]), and checks it against a brute-force fiber oracle
//! ([`oracle`]). The [`statmodel`] module covers the statistical side:
//! sampling parameters, conditional independence quadrics, and contraction of
//! only-child edges.

pub mod generate;
pub mod groebner;
pub mod interpolation;
pub mod oracle;
pub mod polyring;
pub mod scalar;
pub mod stagedtree;
pub mod statmodel;
pub mod tfp;
pub mod verify;

pub use scalar::Scalar;

/// Exact integer coefficients.
pub type Integer = num_bigint::BigInt;
/// Exact rationals for evaluation.
pub type Rational = num_rational::BigRational;
pub type IntPoly = polyring::Polynomial<Integer>;
pub type RatPoly = polyring::Polynomial<Rational>;
pub type RationalPoint = statmodel::ParameterPoint<Rational>;
