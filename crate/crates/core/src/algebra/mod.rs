//! Scalars, polynomials, partial fractions and dense linear algebra.

mod complex;
mod matrix;
mod mpoly;
mod pfrac;
mod roots;
mod scalar;
mod upoly;

pub use complex::{float_to_rational, BigComplex, Float, MIN_PRECISION};
pub use matrix::Matrix;
pub use mpoly::{Exponents, MultiPoly, Vars};
pub use pfrac::{partial_fractions_simple, SimplePoleSum};
pub use roots::{poly_roots, poly_roots_scalar};
pub use scalar::{parse_rational, rational_to_string, Scalar};
pub use upoly::{RootConvention, UniPoly};

/// Exact rationals, always in lowest terms with positive denominator.
pub type Rational = dashu_ratio::RBig;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by the zero polynomial")]
    ZeroPolynomialDivisor,
    #[error("poles {0} and {1} coincide")]
    RepeatedPole(usize, usize),
    #[error("numerator degree {degree} exceeds bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cannot parse `{0}` as a number")]
    Parse(String),
}
