//! Coefficient and evaluation scalars.
//!
//! Everything that stores or evaluates polynomials is generic over [`Scalar`].
//! The symbolic layer uses [`crate::Integer`] coefficients and the model layer
//! evaluates at [`crate::Rational`] points, but `f64` works wherever exactness
//! is not required.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::Num;

/// A commutative ring element usable as a polynomial coefficient.
pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + Display + Send + Sync {}

impl<T> Scalar for T where T: Num + Neg<Output = T> + Clone + Debug + Display + Send + Sync {}
