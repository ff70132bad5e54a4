use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{ExactRing, Rational};
use crate::cyclotomic::CyclotomicElement;
use crate::error::Result;

/// Laurent polynomial in a formal root of unity `z`, with rational coefficients.
///
/// Sector matrices `Z_L^k A` only involve `z = zeta_N^k` through integer powers, so running
/// the characteristic-polynomial recurrence over `Q[z, 1/z]` gives every sector at once.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Rational, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { terms }
    }

    /// `c * sum_{j in range} z^j`
    pub fn power_sum(c: &Rational, range: impl IntoIterator<Item = i64>) -> Self {
        range
            .into_iter()
            .fold(Self::zero(), |acc, j| acc.add(&Self::monomial(c.clone(), j)))
    }

    pub fn coeff(&self, e: i64) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rational> {
        &self.terms
    }

    /// Smallest and largest exponents present.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&e, v)| (e, v * c))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        LaurentPoly { terms }
    }

    /// Image under `z -> zeta_N^k`.
    pub fn specialize(&self, order: u64, k: u32) -> Result<CyclotomicElement> {
        let mut acc = CyclotomicElement::zero(order);
        for (&e, c) in &self.terms {
            let z = CyclotomicElement::root_power(order, e * k as i64)?;
            acc = acc.checked_add(&z.scale(c))?;
        }
        Ok(acc)
    }
}

impl ExactRing for LaurentPoly {
    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&e, c) in &other.terms {
            let slot = terms.entry(e).or_default();
            *slot += c;
            if slot.is_zero() {
                terms.remove(&e);
            }
        }
        LaurentPoly { terms }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<i64, Rational> = BTreeMap::new();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &other.terms {
                *terms.entry(e1 + e2).or_default() += &(c1 * c2);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly { terms }
    }

    fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn div_int(&self, d: i64) -> Self {
        self.scale(&Rational::new(1, d).expect("nonzero divisor"))
    }

    fn constant_like(&self, c: Rational) -> Self {
        Self::constant(c)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| match e {
                0 => format!("{c}"),
                _ => format!("{c}*z^{e}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}
