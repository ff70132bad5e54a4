use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::catalog::phi;
use crate::arith::{ExactRing, Rational, RationalPolynomial};
use crate::error::{Error, Result};

/// Element of `Q(zeta_N)`, stored as a polynomial in `zeta_N` reduced modulo `Phi_N`.
///
/// The representative always has degree `< phi(N)`, so two elements of the same order are
/// equal iff their representatives are.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawElement")]
pub struct CyclotomicElement {
    order: u64,
    #[serde(rename = "coeffs")]
    rep: RationalPolynomial,
}

#[derive(Deserialize)]
struct RawElement {
    order: u64,
    coeffs: RationalPolynomial,
}

impl TryFrom<RawElement> for CyclotomicElement {
    type Error = Error;
    fn try_from(raw: RawElement) -> Result<Self> {
        Self::new(raw.order, raw.coeffs)
    }
}

impl CyclotomicElement {
    /// Reduces `rep` modulo `Phi_order`.
    pub fn new(order: u64, rep: RationalPolynomial) -> Result<Self> {
        let modulus = phi(order)?;
        let rep = if rep.degree() >= modulus.degree() {
            rep.rem(&modulus)?
        } else {
            rep
        };
        Ok(CyclotomicElement { order, rep })
    }

    pub fn from_rational(order: u64, c: Rational) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        CyclotomicElement {
            order,
            rep: RationalPolynomial::constant(c),
        }
    }

    pub fn zero(order: u64) -> Self {
        Self::from_rational(order, Rational::zero())
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rational::one())
    }

    /// `zeta_N^(e mod N)`.
    pub fn root_power(order: u64, e: i64) -> Result<Self> {
        if order == 0 {
            return Err(Error::OutOfRange {
                what: "cyclotomic order",
                value: 0,
            });
        }
        let e = e.rem_euclid(order as i64) as usize;
        Self::new(order, RationalPolynomial::monomial(Rational::one(), e))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rep(&self) -> &RationalPolynomial {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.rep.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.rep.coeff(0)),
            _ => None,
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(CyclotomicElement {
            order: self.order,
            rep: &self.rep + &other.rep,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(CyclotomicElement {
            order: self.order,
            rep: &self.rep - &other.rep,
        })
    }

    /// Convolves the representatives, then reduces modulo `Phi_N`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Self::new(self.order, &self.rep * &other.rep)
    }

    /// Inverse via the extended Euclidean algorithm of `rep` against `Phi_N` over `Q[x]`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        let modulus = phi(self.order)?;
        // Invariant: r_i = s_i * rep (mod Phi).
        let (mut r0, mut r1) = ((*modulus).clone(), self.rep.clone());
        let (mut s0, mut s1) = (RationalPolynomial::zero(), RationalPolynomial::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = &s0 - &(&q * &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // Phi_N is irreducible, so the gcd r0 is a nonzero constant.
        if r0.degree() != Some(0) {
            return Err(Error::Internal(format!(
                "gcd with Phi_{} has degree {:?}",
                self.order,
                r0.degree()
            )));
        }
        let c = r0.coeff(0).recip()?;
        Self::new(self.order, s0.scale(&c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CyclotomicElement {
            order: self.order,
            rep: self.rep.scale(c),
        }
    }

    /// Complex conjugate, i.e. the image under `zeta -> zeta^-1`.
    pub fn conjugate(&self) -> Self {
        let n = self.order as usize;
        let mut acc = RationalPolynomial::zero();
        for (i, c) in self.rep.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &RationalPolynomial::monomial(c.clone(), (n - i % n) % n);
            }
        }
        Self::new(self.order, acc).expect("order already validated")
    }

    /// Same complex number, represented in `Q(zeta_target)`.
    pub fn to_common_order(&self, target: u64) -> Result<Self> {
        if target == 0 || !target.is_multiple_of(self.order) {
            return Err(Error::NotDivisor {
                order: self.order,
                target,
            });
        }
        let k = (target / self.order) as usize;
        Self::new(target, self.rep.compose_power(k))
    }

    /// Evaluates under the embedding `zeta_N -> exp(2 pi i / N)`.
    pub fn to_complex(&self) -> Complex64 {
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / self.order as f64);
        self.rep
            .coeffs()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c.to_f64())
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep.display_with(&format!("z{}", self.order)))
    }
}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] in Q(z{})", self.rep, self.order)
    }
}

// Operator forms panic on an order mismatch; the `checked_*` methods return errors instead.
impl Add for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        self.checked_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl Sub for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        self.checked_sub(rhs).expect("cyclotomic order mismatch")
    }
}

impl Mul for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        self.checked_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement {
            order: self.order,
            rep: -&self.rep,
        }
    }
}

impl ExactRing for CyclotomicElement {
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
        CyclotomicElement::is_zero(self)
    }
    fn div_int(&self, d: i64) -> Self {
        self.scale(&Rational::new(1, d).expect("nonzero divisor"))
    }
    fn constant_like(&self, c: Rational) -> Self {
        Self::from_rational(self.order, c)
    }
}

pub fn cyclo_add(a: &CyclotomicElement, b: &CyclotomicElement) -> Result<CyclotomicElement> {
    a.checked_add(b)
}

pub fn cyclo_mul(a: &CyclotomicElement, b: &CyclotomicElement) -> Result<CyclotomicElement> {
    a.checked_mul(b)
}

pub fn cyclo_inverse(a: &CyclotomicElement) -> Result<CyclotomicElement> {
    a.inverse()
}

pub fn root_power(order: u64, e: i64) -> Result<CyclotomicElement> {
    CyclotomicElement::root_power(order, e)
}

pub fn to_common_order(a: &CyclotomicElement, target: u64) -> Result<CyclotomicElement> {
    a.to_common_order(target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, e: i64) -> CyclotomicElement {
        root_power(n, e).unwrap()
    }

    #[test]
    fn i_squared() {
        assert_eq!(
            &z(4, 1) * &z(4, 1),
            CyclotomicElement::from_rational(4, Rational::from_int(-1))
        );
        assert_eq!(z(4, 1).rep(), &RationalPolynomial::x());
    }

    #[test]
    fn inverse_on_unit_circle() {
        for n in 2..15u64 {
            for k in 0..n as i64 {
                assert_eq!(z(n, k).inverse().unwrap(), z(n, n as i64 - k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn sum_of_fifth_roots_vanishes() {
        let s = (0..5).fold(CyclotomicElement::zero(5), |acc, j| &acc + &z(5, j));
        assert!(s.is_zero());
    }

    #[test]
    fn modular_exponent() {
        assert_eq!(z(7, 0), CyclotomicElement::one(7));
        assert_eq!(z(3, -1), z(3, 2));
        assert_eq!(z(6, 13), z(6, 1));
    }

    #[test]
    fn errors() {
        assert_eq!(
            z(3, 1).checked_mul(&z(4, 1)),
            Err(Error::OrderMismatch { left: 3, right: 4 })
        );
        assert_eq!(CyclotomicElement::zero(5).inverse(), Err(Error::NotInvertible));
        assert_eq!(
            z(4, 1).to_common_order(6),
            Err(Error::NotDivisor {
                order: 4,
                target: 6
            })
        );
    }

    #[test]
    fn lifting() {
        assert_eq!(z(2, 1).to_common_order(6).unwrap(), z(6, 3));
        assert_eq!(CyclotomicElement::one(3).to_common_order(12).unwrap(), CyclotomicElement::one(12));
        let lifted = z(3, 1).to_common_order(9).unwrap();
        assert_eq!(lifted, z(9, 3));
        assert!((lifted.to_complex() - z(3, 1).to_complex()).norm() < 1e-12);
    }

    #[test]
    fn conjugate_matches_inverse_for_roots() {
        for k in 0..12 {
            assert_eq!(z(12, k).conjugate(), z(12, -k));
        }
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(z(4, 1)).unwrap();
        assert_eq!(v, serde_json::json!({"order": 4, "coeffs": ["0", "1"]}));
        // Non-canonical input is reduced on the way in.
        let back: CyclotomicElement =
            serde_json::from_value(serde_json::json!({"order": 4, "coeffs": ["0", "0", "1"]}))
                .unwrap();
        assert_eq!(back, CyclotomicElement::from_rational(4, Rational::from_int(-1)));
    }

    #[test]
    fn rationality() {
        let s = &z(6, 1) + &z(6, 5);
        assert_eq!(s.as_rational(), Some(Rational::one()));
        assert_eq!(z(6, 1).as_rational(), None);
    }
}
