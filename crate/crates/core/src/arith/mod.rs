//! Exact rational scalars, dense polynomials and matrices over Q.

mod matrix;
mod poly;
mod rational;

pub use matrix::RationalMatrix;
pub use poly::RationalPolynomial;
pub use rational::Rational;

/// Ring operations used by the generic characteristic-polynomial routines.
///
/// Only exact division by small positive integers is required, which every ring of
/// characteristic zero used here supports.
pub trait ExactRing: Clone + PartialEq {
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn div_int(&self, d: i64) -> Self;
    /// Embeds a rational constant into the same ring as `self` (same cyclotomic order, etc.).
    fn constant_like(&self, c: Rational) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl ExactRing for Rational {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn div_int(&self, d: i64) -> Self {
        self / &Rational::from_int(d)
    }
    fn constant_like(&self, c: Rational) -> Self {
        c
    }
}
