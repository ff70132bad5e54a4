use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::{Error, Result};

/// Dense univariate polynomial over the rationals; `coeffs[i]` is the coefficient of `x^i`.
///
/// The coefficient vector is always trimmed, so the zero polynomial is the empty vector and
/// equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = RationalPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        RationalPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// `x^n - 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[0] = Rational::from_int(-1);
        coeffs[n] += &Rational::one();
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Rational::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Rational::is_one)
    }

    /// True iff every coefficient is an integer.
    pub fn is_integer(&self) -> bool {
        self.coeffs.iter().all(Rational::is_integer)
    }

    /// Lowest degree carrying a non-integer coefficient.
    pub fn first_non_integer(&self) -> Option<(usize, &Rational)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_integer())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        RationalPolynomial { coeffs }
    }

    /// Horner evaluation.
    pub fn eval(&self, v: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * v + c)
    }

    pub fn eval_f64(&self, v: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * v + c.to_f64())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficients in reverse order: `x^d p(1/x)` for `d = deg p`.
    pub fn reversed(&self, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[degree - i] = c.clone();
        }
        Self::new(coeffs)
    }

    /// Substitutes `x -> x^k`.
    pub fn compose_power(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::new(coeffs)
    }

    /// Euclidean division: returns `(q, r)` with `self = q*d + r` and `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZeroPolynomial)?;
        let lead_inv = d.coeffs[dd].recip()?;
        let Some(pd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if pd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); pd - dd + 1];
        for i in (0..=pd - dd).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[i + j] -= &(&c * dc);
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient when `d` divides `self`, otherwise `None`.
    pub fn exact_div(&self, d: &Self) -> Result<Option<Self>> {
        let (q, r) = self.divrem(d)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Renders with variable name `var`, highest degree first.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl fmt::Debug for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPolynomial({self})")
    }
}

impl Serialize for RationalPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(Self::new(Vec::<Rational>::deserialize(deserializer)?))
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        RationalPolynomial::new(coeffs)
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        RationalPolynomial::new(coeffs)
    }
}

macro_rules! owned_binop {
    ($Trait:ident, $method:ident) => {
        impl $Trait for RationalPolynomial {
            type Output = RationalPolynomial;
            fn $method(self, rhs: RationalPolynomial) -> RationalPolynomial {
                $Trait::$method(&self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_ints(c)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&p(&[1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 1]));
    }

    #[test]
    fn additive_identity() {
        let a = p(&[3, 0, -2, 5]);
        assert_eq!(&a + &RationalPolynomial::zero(), a);
    }

    #[test]
    fn hand_convolution() {
        // (x^2 + 1) * x^3
        assert_eq!(&p(&[1, 0, 1]) * &p(&[0, 0, 0, 1]), p(&[0, 0, 0, 1, 0, 1]));
    }

    #[test]
    fn trimmed_after_cancellation() {
        let a = p(&[1, 2, 3]);
        let b = p(&[0, 0, 3]);
        assert_eq!((&a - &b).degree(), Some(1));
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).degree(), None);
    }

    #[test]
    fn divrem_geometric_sum() {
        let (qt, r) = p(&[-1, 0, 0, 1]).divrem(&p(&[-1, 1])).unwrap();
        assert_eq!(qt, p(&[1, 1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn divrem_degree_underflow() {
        let (qt, r) = p(&[0, 1]).divrem(&p(&[0, 0, 1])).unwrap();
        assert!(qt.is_zero());
        assert_eq!(r, p(&[0, 1]));
    }

    #[test]
    fn divrem_hand_long_division() {
        // (x^4 - 1) / (x^2 + 1) = x^2 - 1
        let (qt, r) = p(&[-1, 0, 0, 0, 1]).divrem(&p(&[1, 0, 1])).unwrap();
        assert_eq!(qt, p(&[-1, 0, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn divrem_by_zero_polynomial() {
        assert_eq!(
            p(&[1, 1]).divrem(&RationalPolynomial::zero()),
            Err(Error::DivisionByZeroPolynomial)
        );
    }

    #[test]
    fn integrality() {
        assert!(p(&[-1, 0, 1]).is_integer());
        let third = RationalPolynomial::new(vec![Rational::one(), q(1, 3)]);
        assert!(!third.is_integer());
        // x^3 + (2/3)*3*x reduces to an integer coefficient
        let reduced = RationalPolynomial::new(vec![
            Rational::zero(),
            &q(2, 3) * &q(3, 1),
            Rational::zero(),
            Rational::one(),
        ]);
        assert!(reduced.is_integer());
        assert_eq!(reduced.coeff(1), q(2, 1));
    }

    #[test]
    fn horner() {
        assert_eq!(p(&[-1, 0, 1]).eval(&q(1, 1)), Rational::zero());
        assert_eq!(p(&[0, 1]).eval(&q(7, 2)), q(7, 2));
        assert_eq!(p(&[1, 1, 0, 1]).eval(&q(-2, 1)), q(-9, 1));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 1]).to_string(), "x^2 - 1");
        let r = RationalPolynomial::new(vec![q(2, 3), q(-1, 1), Rational::zero(), q(1, 1)]);
        assert_eq!(r.to_string(), "x^3 - x + 2/3");
        assert_eq!(RationalPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn json_is_ascending_array() {
        let r = RationalPolynomial::new(vec![q(-1, 1), q(2, 3), q(1, 1)]);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"["-1","2/3","1"]"#);
        assert_eq!(serde_json::from_str::<RationalPolynomial>(&json).unwrap(), r);
    }

    #[test]
    fn reversal_and_compose() {
        let a = p(&[-1, 2, 0, 1]);
        assert_eq!(a.reversed(3), p(&[1, 0, 2, -1]));
        assert_eq!(p(&[1, 1]).compose_power(3), p(&[1, 0, 0, 1]));
        assert_eq!(p(&[1, 1]).pow(3), p(&[1, 3, 3, 1]));
    }
}
