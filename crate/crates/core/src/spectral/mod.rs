//! Momentum-sector characteristic polynomials `f_{N,k}(x) = det(xI - Z^k A)` and their
//! product `f_N(x) = det(xI - U)`.

mod coefficients;
mod direct;
mod laurent;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{ExactRing, Rational, RationalPolynomial};
use crate::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};
use crate::walk::{coin_matrix, evolution_matrix, momentum_matrix, Family, WalkSpec};

pub use coefficients::{
    check_coefficient_formulas, CoefficientCheck, CoefficientReport, IntegerFamily,
    PrintedVariant,
};
pub use direct::direct_charpoly;
pub use laurent::LaurentPoly;

/// Largest dimension `LN` for which the sector product is cross-checked against a direct
/// determinant of `U`.
pub const DIRECT_CHECK_LIMIT: usize = 60;

/// Characteristic polynomial of a square matrix by the Faddeev-LeVerrier recurrence.
///
/// Returns ascending coefficients `c_0..c_n` of `det(xI - A)`, with `c_n = 1`. Only exact
/// division by `1..=n` is needed.
pub fn faddeev_leverrier<T: ExactRing>(a: &[Vec<T>]) -> Vec<T> {
    let n = a.len();
    assert!(n > 0 && a.iter().all(|r| r.len() == n), "square, non-empty matrix");
    let zero = a[0][0].constant_like(Rational::zero());
    let one = a[0][0].constant_like(Rational::one());
    let mut coeffs = vec![zero.clone(); n + 1];
    coeffs[n] = one;
    // a_m holds A * M_{k-1}; M_0 = 0.
    let mut a_m = vec![vec![zero.clone(); n]; n];
    for k in 1..=n {
        let mut m_k = a_m;
        for (i, row) in m_k.iter_mut().enumerate() {
            row[i] = row[i].add(&coeffs[n - k + 1]);
        }
        a_m = mat_mul(a, &m_k, &zero);
        let trace = (0..n).fold(zero.clone(), |acc, i| acc.add(&a_m[i][i]));
        coeffs[n - k] = trace.neg().div_int(k as i64);
    }
    coeffs
}

pub(crate) fn mat_mul<T: ExactRing>(a: &[Vec<T>], b: &[Vec<T>], zero: &T) -> Vec<Vec<T>> {
    let n = a.len();
    let mut out = vec![vec![zero.clone(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
                }
            }
        }
    }
    out
}

/// Polynomial in `x` with coefficients in `Q(zeta_N)`, ascending and trimmed.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloPolynomial {
    order: u64,
    coeffs: Vec<CyclotomicElement>,
}

impl CycloPolynomial {
    pub fn new(order: u64, mut coeffs: Vec<CyclotomicElement>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| c.order() != order) {
            return Err(Error::OrderMismatch {
                left: order,
                right: bad.order(),
            });
        }
        while coeffs.last().is_some_and(CyclotomicElement::is_zero) {
            coeffs.pop();
        }
        Ok(CycloPolynomial { order, coeffs })
    }

    pub fn from_rational(order: u64, p: &RationalPolynomial) -> Self {
        let coeffs = p
            .coeffs()
            .iter()
            .map(|c| CyclotomicElement::from_rational(order, c.clone()))
            .collect();
        CycloPolynomial { order, coeffs }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[CyclotomicElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> CyclotomicElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| CyclotomicElement::zero(self.order))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(CyclotomicElement::is_one)
    }

    /// The same polynomial over `Q` when every coefficient is rational.
    pub fn to_rational(&self) -> Option<RationalPolynomial> {
        self.coeffs
            .iter()
            .map(CyclotomicElement::as_rational)
            .collect::<Option<Vec<_>>>()
            .map(RationalPolynomial::new)
    }

    /// Coefficient-wise complex conjugate.
    pub fn conjugate(&self) -> Self {
        CycloPolynomial {
            order: self.order,
            coeffs: self.coeffs.iter().map(CyclotomicElement::conjugate).collect(),
        }
    }

    /// Product, reducing each output coefficient modulo `Phi_N` once.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(CycloPolynomial {
                order: self.order,
                coeffs: Vec::new(),
            });
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut raw = vec![RationalPolynomial::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] = &raw[i + j] + &(a.rep() * b.rep());
                }
            }
        }
        let coeffs = raw
            .into_iter()
            .map(|r| CyclotomicElement::new(self.order, r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.order, coeffs)
    }
}

impl fmt::Display for CycloPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for CycloPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloPolynomial[Q(z{})]({self})", self.order)
    }
}

/// The sector matrix `Z^k A` over `Q(zeta_N)`.
pub fn sector_matrix(spec: &WalkSpec, k: u32) -> Result<Vec<Vec<CyclotomicElement>>> {
    let z = momentum_matrix(spec, k)?;
    let a = coin_matrix(spec);
    Ok((0..a.size())
        .map(|i| {
            a.matrix()
                .row(i)
                .iter()
                .map(|c| z[i].scale(c))
                .collect()
        })
        .collect())
}

/// `f_{N,k}(x) = det(xI_L - Z^k A)` over `Q(zeta_N)`.
pub fn sector_charpoly(spec: &WalkSpec, k: u32) -> Result<CycloPolynomial> {
    let z = momentum_matrix(spec, k)?;
    let coeffs = sector_faddeev_leverrier(&z, spec.family() == Family::F);
    let out = CycloPolynomial::new(spec.vertices() as u64, coeffs)?;
    if out.degree() != Some(spec.states() as usize) || !out.is_monic() {
        return Err(Error::Internal(format!(
            "sector {k} of {spec} is not monic of degree L"
        )));
    }
    Ok(out)
}

/// Faddeev-LeVerrier specialised to `D ((2/L) J - R)` with `D = diag(z)` and `R` the identity or
/// the reversal permutation. A product with this matrix costs `O(L^2)` instead of `O(L^3)`.
fn sector_faddeev_leverrier(z: &[CyclotomicElement], reversal: bool) -> Vec<CyclotomicElement> {
    let n = z.len();
    let zero = z[0].constant_like(Rational::zero());
    let two_over_l = Rational::new(2, n as i64).expect("nonzero size");
    let mut coeffs = vec![zero.clone(); n + 1];
    coeffs[n] = z[0].constant_like(Rational::one());
    let mut a_m = vec![vec![zero.clone(); n]; n];
    for k in 1..=n {
        let mut m_k = a_m;
        for (i, row) in m_k.iter_mut().enumerate() {
            row[i] = row[i].add(&coeffs[n - k + 1]);
        }
        let col_sums: Vec<CyclotomicElement> = (0..n)
            .map(|j| {
                m_k.iter()
                    .fold(zero.clone(), |acc, row| acc.add(&row[j]))
                    .scale(&two_over_l)
            })
            .collect();
        a_m = (0..n)
            .map(|i| {
                let src = if reversal { &m_k[n - 1 - i] } else { &m_k[i] };
                (0..n).map(|j| z[i].mul(&col_sums[j].sub(&src[j]))).collect()
            })
            .collect();
        let trace = (0..n).fold(zero.clone(), |acc, i| acc.add(&a_m[i][i]));
        coeffs[n - k] = trace.neg().div_int(k as i64);
    }
    coeffs
}

/// `det(xI_L - Z(z) A)` with `z` left formal: one Laurent polynomial per power of `x`.
///
/// Specializing `z -> zeta_N^k` gives `f_{N,k}` for every `N` at once.
pub fn generic_sector_charpoly(spec: &WalkSpec) -> Vec<LaurentPoly> {
    let a = coin_matrix(spec);
    let m = spec.m() as i64;
    let rows: Vec<Vec<LaurentPoly>> = (0..a.size())
        .map(|i| {
            a.matrix()
                .row(i)
                .iter()
                .map(|c| LaurentPoly::monomial(c.clone(), m - i as i64))
                .collect()
        })
        .collect();
    faddeev_leverrier(&rows)
}

/// All momentum sectors of a walk together with their product over `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPolyBundle {
    pub spec: WalkSpec,
    pub sectors: Vec<CycloPolynomial>,
    /// `f_N(x) = prod_k f_{N,k}(x)`.
    pub product: RationalPolynomial,
    /// Whether the product was compared against a direct determinant of `U`.
    pub direct_checked: bool,
}

/// Computes every sector in parallel, multiplies them in `Q(zeta_N)` and asserts that the
/// result is rational. For `LN <= 60` the product is also compared with `det(xI - U)`.
pub fn full_charpoly(spec: &WalkSpec) -> Result<CharPolyBundle> {
    let sectors = (0..spec.vertices())
        .into_par_iter()
        .map(|k| sector_charpoly(spec, k))
        .collect::<Result<Vec<_>>>()?;
    let product = sector_product(spec, &sectors)?;
    let direct_checked = spec.dimension() <= DIRECT_CHECK_LIMIT;
    if direct_checked {
        let direct = direct_charpoly(evolution_matrix(spec).matrix())?;
        if direct != product {
            return Err(Error::Internal(format!(
                "sector product differs from det(xI - U) for {spec}"
            )));
        }
    }
    Ok(CharPolyBundle {
        spec: *spec,
        sectors,
        product,
        direct_checked,
    })
}

fn sector_product(spec: &WalkSpec, sectors: &[CycloPolynomial]) -> Result<RationalPolynomial> {
    let n = spec.vertices() as u64;
    let mut acc = CycloPolynomial::from_rational(n, &RationalPolynomial::one());
    for s in sectors {
        acc = acc.checked_mul(s)?;
    }
    let product = acc.to_rational().ok_or_else(|| {
        Error::Internal(format!("sector product of {spec} has an irrational coefficient"))
    })?;
    let constant_ok = product.coeff(0).abs().is_one();
    if !product.is_monic() || product.degree() != Some(spec.dimension()) || !constant_ok {
        return Err(Error::Internal(format!(
            "sector product of {spec} is not monic of degree LN with unit constant term"
        )));
    }
    Ok(product)
}

/// Convergence threshold and sweep cap of the floating Schur decomposition. The default
/// machine-epsilon target of nalgebra never converges on some of these highly degenerate
/// spectra.
const SCHUR_EPS: f64 = 1e-13;
const SCHUR_MAX_ITER: usize = 100_000;

/// Floating-point eigenvalues of `U`, or `None` if the Schur iteration does not converge.
pub fn float_eigenvalues(spec: &WalkSpec) -> Option<Vec<num_complex::Complex64>> {
    let m = evolution_matrix(spec).matrix().to_f64();
    let schur = nalgebra::linalg::Schur::try_new(m, SCHUR_EPS, SCHUR_MAX_ITER)?;
    Some(
        schur
            .complex_eigenvalues()
            .iter()
            .map(|z| num_complex::Complex64::new(z.re, z.im))
            .collect(),
    )
}

/// Largest distance `| |lambda| - 1 |` over the floating-point eigenvalues of `U`;
/// infinite when the eigenvalues could not be computed.
pub fn unit_circle_deviation(spec: &WalkSpec) -> f64 {
    float_eigenvalues(spec).map_or(f64::INFINITY, |ev| {
        ev.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max)
    })
}
