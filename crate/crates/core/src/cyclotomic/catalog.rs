use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::arith::RationalPolynomial;
use crate::error::{Error, Result};

type Catalog = RwLock<HashMap<u64, Arc<RationalPolynomial>>>;

fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The `n`-th cyclotomic polynomial, memoized per process.
///
/// Built as `(x^n - 1) / prod_{d | n, d < n} Phi_d(x)`.
pub fn cyclotomic_polynomial(n: u64) -> Result<RationalPolynomial> {
    Ok((*phi(n)?).clone())
}

pub(crate) fn phi(n: u64) -> Result<Arc<RationalPolynomial>> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "cyclotomic index",
            value: 0,
        });
    }
    if let Some(p) = catalog().read().expect("catalog poisoned").get(&n) {
        return Ok(Arc::clone(p));
    }
    let mut acc = RationalPolynomial::x_pow_minus_one(n as usize);
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        acc = acc
            .exact_div(&*phi(d)?)?
            .ok_or_else(|| Error::Internal(format!("Phi_{d} does not divide x^{n} - 1")))?;
    }
    let arc = Arc::new(acc);
    // Concurrent builders produce identical values; the first insert wins.
    let mut w = catalog().write().expect("catalog poisoned");
    Ok(Arc::clone(w.entry(n).or_insert(arc)))
}

/// Cyclotomic factors peeled off a monic polynomial, plus what is left over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloFactorCertificate {
    /// Order `d` of `Phi_d` mapped to its multiplicity; serialized as `[[d, mult], ...]`.
    #[serde(with = "factor_pairs")]
    pub factors: BTreeMap<u64, u32>,
    pub remainder: RationalPolynomial,
}

impl CycloFactorCertificate {
    /// True iff the input was a product of cyclotomic polynomials.
    pub fn is_complete(&self) -> bool {
        self.remainder.is_one()
    }

    /// Least common multiple of the orders present.
    pub fn lcm_of_orders(&self) -> u64 {
        self.factors
            .keys()
            .fold(1, |acc, &d| num_integer::lcm(acc, d))
    }

    /// `prod Phi_d^mult * remainder`.
    pub fn reconstruct(&self) -> Result<RationalPolynomial> {
        let mut acc = self.remainder.clone();
        for (&d, &mult) in &self.factors {
            acc = &acc * &phi(d)?.pow(mult);
        }
        Ok(acc)
    }

    /// Compact form `{1:1;2:2;3:2}`.
    pub fn compact(&self) -> String {
        let body: Vec<String> = self
            .factors
            .iter()
            .map(|(d, m)| format!("{d}:{m}"))
            .collect();
        format!("{{{}}}", body.join(";"))
    }
}

mod factor_pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u64, u32>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, u32>, D::Error> {
        Ok(Vec::<(u64, u32)>::deserialize(d)?.into_iter().collect())
    }
}

/// Largest `d` that can satisfy `phi(d) <= degree`, from `phi(d) >= sqrt(d/2)`.
pub fn candidate_bound(degree: usize) -> u64 {
    2 * (degree as u64).pow(2)
}

/// Trial-divides a monic polynomial by every `Phi_d` with `phi(d) <= deg`, repeatedly.
pub fn strip_cyclotomic_factors(p: &RationalPolynomial) -> Result<CycloFactorCertificate> {
    if !p.is_monic() {
        return Err(Error::NonMonic);
    }
    let deg = p.degree().unwrap_or(0);
    let mut remainder = p.clone();
    let mut factors = BTreeMap::new();
    for d in 1..=candidate_bound(deg) {
        let rdeg = remainder.degree().unwrap_or(0) as u64;
        if rdeg == 0 {
            break;
        }
        if euler_phi(d) > rdeg {
            continue;
        }
        let phi_d = phi(d)?;
        while let Some(q) = remainder.exact_div(&phi_d)? {
            remainder = q;
            *factors.entry(d).or_insert(0) += 1;
        }
    }
    Ok(CycloFactorCertificate { factors, remainder })
}
