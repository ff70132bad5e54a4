//! Period decision for the evolution operator, with certificates.
//!
//! A monic polynomial with rational coefficients whose roots are all roots of unity has
//! integer coefficients and splits into cyclotomic factors. So `U` has finite period iff
//! `f_N(x) = det(xI - U)` is integral and fully cyclotomic, and the period is then the lcm
//! of the cyclotomic orders (`U` is diagonalizable, being orthogonal).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{ExactRing, Rational, RationalPolynomial};
use crate::cyclotomic::{strip_cyclotomic_factors, CycloFactorCertificate, CyclotomicElement};
use crate::error::{Error, Result};
use crate::spectral::{float_eigenvalues, full_charpoly, mat_mul, sector_matrix};
use crate::walk::{evolution_matrix, Family, WalkSpec};

/// Finite verdicts are confirmed by an exact matrix power when `LN * T` is at most this.
pub const POWER_CHECK_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerConfirmation {
    #[serde(rename = "confirmed")]
    Confirmed,
    #[serde(rename = "unconfirmed-by-power")]
    Unconfirmed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InfiniteCertificate {
    /// The coefficient of `x^degree` in `f_N` is not an integer.
    NonIntegerCoefficient { degree: usize, value: Rational },
    /// `f_N` is integral but leaves this factor after removing all cyclotomic factors.
    NonCyclotomicRemainder { poly: RationalPolynomial },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Finite {
        #[serde(rename = "T")]
        period: u64,
        factors: CycloFactorCertificate,
        confirmation: PowerConfirmation,
    },
    Infinite {
        certificate: InfiniteCertificate,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodResult {
    pub spec: WalkSpec,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl PeriodResult {
    pub fn period(&self) -> Option<u64> {
        match &self.verdict {
            Verdict::Finite { period, .. } => Some(*period),
            Verdict::Infinite { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.period().is_some()
    }

    pub fn verdict_name(&self) -> &'static str {
        match self.verdict {
            Verdict::Finite { .. } => "finite",
            Verdict::Infinite { .. } => "infinite",
        }
    }

    pub fn certificate_kind(&self) -> &'static str {
        match &self.verdict {
            Verdict::Finite { .. } => "cyclotomic",
            Verdict::Infinite {
                certificate: InfiniteCertificate::NonIntegerCoefficient { .. },
            } => "non_integer_coeff",
            Verdict::Infinite {
                certificate: InfiniteCertificate::NonCyclotomicRemainder { .. },
            } => "non_cyclotomic_remainder",
        }
    }

    /// Single-field encoding of the certificate.
    pub fn certificate_detail(&self) -> String {
        match &self.verdict {
            Verdict::Finite { factors, .. } => factors.compact(),
            Verdict::Infinite { certificate } => match certificate {
                InfiniteCertificate::NonIntegerCoefficient { degree, value } => {
                    format!("deg={degree} val={value}")
                }
                InfiniteCertificate::NonCyclotomicRemainder { poly } => format!("rem={poly}"),
            },
        }
    }
}

/// Decides the period of `U` from `f_N`.
///
/// Errors only signal failed internal consistency checks.
pub fn decide_period(spec: &WalkSpec) -> Result<PeriodResult> {
    let product = full_charpoly(spec)?.product;
    decide_from_charpoly(spec, &product)
}

/// The decision procedure applied to an already computed `f_N`.
pub fn decide_from_charpoly(spec: &WalkSpec, f: &RationalPolynomial) -> Result<PeriodResult> {
    if let Some((degree, value)) = f.first_non_integer() {
        return Ok(PeriodResult {
            spec: *spec,
            verdict: Verdict::Infinite {
                certificate: InfiniteCertificate::NonIntegerCoefficient {
                    degree,
                    value: value.clone(),
                },
            },
        });
    }
    let factors = strip_cyclotomic_factors(f)?;
    if !factors.is_complete() {
        return Ok(PeriodResult {
            spec: *spec,
            verdict: Verdict::Infinite {
                certificate: InfiniteCertificate::NonCyclotomicRemainder {
                    poly: factors.remainder,
                },
            },
        });
    }
    let period = factors.lcm_of_orders();
    let confirmation = if spec.dimension() as u64 * period <= POWER_CHECK_BUDGET {
        match period_by_power(spec, period) {
            Some(t) if t == period => PowerConfirmation::Confirmed,
            other => {
                return Err(Error::CertificateMismatch {
                    family: spec.family(),
                    states: spec.states(),
                    vertices: spec.vertices(),
                    detail: format!("factor lcm gives T={period}, matrix powers give {other:?}"),
                })
            }
        }
    } else {
        PowerConfirmation::Unconfirmed
    };
    Ok(PeriodResult {
        spec: *spec,
        verdict: Verdict::Finite {
            period,
            factors,
            confirmation,
        },
    })
}

/// Least `T <= max_t` with `U^T = I`, by exact repeated multiplication.
///
/// Works with the integer matrix `B = L U`, testing `B^T = L^T I`.
pub fn period_by_power(spec: &WalkSpec, max_t: u64) -> Option<u64> {
    let u = evolution_matrix(spec);
    let rows = u.scaled_sparse_rows();
    let n = u.dimension();
    let l = BigInt::from(spec.states());
    let mut power: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = vec![BigInt::zero(); n];
            row[i] = BigInt::one();
            row
        })
        .collect();
    let mut scale = BigInt::one();
    for t in 1..=max_t {
        power = rows
            .iter()
            .map(|row| {
                let mut acc = vec![BigInt::zero(); n];
                for (c, v) in row {
                    for (a, p) in acc.iter_mut().zip(&power[*c]) {
                        if !p.is_zero() {
                            *a += v * p;
                        }
                    }
                }
                acc
            })
            .collect();
        scale *= &l;
        let is_scaled_identity = power.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, e)| if i == j { *e == scale } else { e.is_zero() })
        });
        if is_scaled_identity {
            return Some(t);
        }
    }
    None
}

/// Closed-form linear coefficient of `f_N` for `gcd(N, L) = 1`, checked against the engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoprimeCertificate {
    pub spec: WalkSpec,
    pub closed_form: Rational,
    pub engine_value: Rational,
    /// The F-type form `(-1)^{N(m+1)} N/L (2(2q+1) + 2m - 3)` as printed; equal to
    /// `closed_form` only when `q = 0`. Always equal to `closed_form` for M-type.
    pub printed_value: Rational,
    pub printed_agrees: bool,
}

/// Returns `None` unless `gcd(N, L) = 1`. With `q = floor(m / N)`:
/// M-type `(-1)^N (2m-1)/L (2q+1) N`; F-type `(-1)^{N(m+1)} N/L (2m - 1 - 4q)`.
pub fn coprime_certificate(spec: &WalkSpec) -> Result<Option<CoprimeCertificate>> {
    let (l, n) = (spec.states() as i64, spec.vertices() as i64);
    if l.gcd(&n) != 1 {
        return Ok(None);
    }
    let m = spec.m() as i64;
    let q = m / n;
    let parity = |e: i64| if e % 2 == 0 { 1 } else { -1 };
    let (closed_form, printed_value) = match spec.family() {
        Family::M => {
            let v = Rational::new(parity(n) * (2 * m - 1) * (2 * q + 1) * n, l)?;
            (v.clone(), v)
        }
        Family::F => {
            let s = parity(n * (m + 1));
            (
                Rational::new(s * n * (2 * m - 1 - 4 * q), l)?,
                Rational::new(s * n * (2 * (2 * q + 1) + 2 * m - 3), l)?,
            )
        }
    };
    let engine_value = full_charpoly(spec)?.product.coeff(1);
    let fail = |detail: String| Error::CertificateMismatch {
        family: spec.family(),
        states: spec.states(),
        vertices: spec.vertices(),
        detail,
    };
    if closed_form != engine_value {
        return Err(fail(format!(
            "closed form {closed_form} differs from engine coefficient {engine_value}"
        )));
    }
    if engine_value.is_integer() {
        return Err(fail(format!("linear coefficient {engine_value} is integral")));
    }
    Ok(Some(CoprimeCertificate {
        spec: *spec,
        printed_agrees: printed_value == closed_form,
        closed_form,
        engine_value,
        printed_value,
    }))
}

type SectorMatrix = Vec<Vec<CyclotomicElement>>;

fn is_identity(m: &SectorMatrix) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, e)| if i == j { e.is_one() } else { e.is_zero() })
    })
}

fn require_f_type_square(spec: &WalkSpec) -> Result<()> {
    if spec.family() != Family::F || spec.vertices() != spec.states() {
        return Err(Error::Precondition(format!(
            "needs an F-type walk with N = L, got {spec}"
        )));
    }
    Ok(())
}

fn squares(spec: &WalkSpec) -> Result<Vec<SectorMatrix>> {
    (0..spec.vertices())
        .map(|k| {
            let a = sector_matrix(spec, k)?;
            let zero = a[0][0].constant_like(Rational::zero());
            Ok(mat_mul(&a, &a, &zero))
        })
        .collect()
}

/// True iff `(Z^k A)^4 = I` for every `k` while `(Z^k A)^2 != I` for some `k`.
pub fn fourth_power_check(spec: &WalkSpec) -> Result<bool> {
    require_f_type_square(spec)?;
    let sq = squares(spec)?;
    let all_fourth = sq.iter().all(|s| {
        let zero = s[0][0].constant_like(Rational::zero());
        is_identity(&mat_mul(s, s, &zero))
    });
    Ok(all_fourth && !sq.iter().all(is_identity))
}

/// Entries of `L^2 (Z^k A)^2` for `k != 0`: `L^2 - 4L` on the diagonal and
/// `-2L (1 + zeta^{(j-i)k})` at `(i, j)` off it. Returns whether this holds for all `k`.
pub fn rescaled_square_check(spec: &WalkSpec) -> Result<bool> {
    require_f_type_square(spec)?;
    let l = spec.states() as i64;
    let order = spec.vertices() as u64;
    let l2 = Rational::from_int(l * l);
    for (k, s) in squares(spec)?.iter().enumerate().skip(1) {
        for (i, row) in s.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let want = if i == j {
                    CyclotomicElement::from_rational(order, Rational::from_int(l * l - 4 * l))
                } else {
                    let z = CyclotomicElement::root_power(order, (j as i64 - i as i64) * k as i64)?;
                    (&CyclotomicElement::one(order) + &z).scale(&Rational::from_int(-2 * l))
                };
                if e.scale(&l2) != want {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The `x^3` coefficient of `f_{L^2}` and whether it fails to be an integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicCertificate {
    pub spec: WalkSpec,
    pub value: Rational,
    pub non_integer: bool,
}

pub fn l_squared_certificate(family: Family, states: u32) -> Result<CubicCertificate> {
    let spec = WalkSpec::new(family, states, states * states)?;
    let value = full_charpoly(&spec)?.product.coeff(3);
    Ok(CubicCertificate {
        spec,
        non_integer: !value.is_integer(),
        value,
    })
}

/// Floating-point corroboration of an infinite period: some eigenvalue `lambda` of `U`
/// satisfies `|lambda^n - 1| > 1e-6` for every `n <= 1000`.
pub fn float_corroborates_infinite(spec: &WalkSpec) -> bool {
    float_eigenvalues(spec).unwrap_or_default().iter().any(|lambda| {
        let mut p = num_complex::Complex64::new(1.0, 0.0);
        (1..=1000).all(|_| {
            p *= lambda;
            (p - 1.0).norm() > 1e-6
        })
    })
}
