//! Walk zeta functions `det(I - uU)^{-1}`, their Kurokawa form and absolute-zeta data.

mod kurokawa;
mod numeric;

use serde::{Deserialize, Serialize};

use crate::arith::{Rational, RationalMatrix, RationalPolynomial};
use crate::error::{Error, Result};
use crate::spectral::{full_charpoly, DIRECT_CHECK_LIMIT};
use crate::walk::{evolution_matrix, WalkSpec};

pub use kurokawa::{
    absolute_zeta_descriptor, recognize_kurokawa, AbsZetaDescriptor, FactorRecord, KurokawaForm,
    SubsetTerm, MAX_SUBSET_FACTORS,
};
pub use numeric::{eval_multiple_hurwitz, eval_zf_mellin, eval_zf_series, MELLIN_SPLIT};

/// A quotient of polynomials over `Q`, compared by cross-multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunction {
    pub numerator: RationalPolynomial,
    pub denominator: RationalPolynomial,
}

impl RationalFunction {
    pub fn new(numerator: RationalPolynomial, denominator: RationalPolynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::DivisionByZeroPolynomial);
        }
        Ok(RationalFunction {
            numerator,
            denominator,
        })
    }

    /// Equality as functions: `p/q = r/s` iff `p s = r q`.
    pub fn equivalent(&self, other: &Self) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.numerator.eval_f64(x) / self.denominator.eval_f64(x)
    }

    pub fn display_with(&self, var: &str) -> String {
        format!(
            "({}) / ({})",
            self.numerator.display_with(var),
            self.denominator.display_with(var)
        )
    }
}

/// `zeta(u) = 1 / det(I - uU)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkZeta {
    pub spec: WalkSpec,
    /// `det(I - uU)`, ascending in `u`.
    pub denominator: RationalPolynomial,
    /// Whether the denominator was compared against exact determinants of `I - uU`.
    pub direct_checked: bool,
}

impl WalkZeta {
    pub fn as_rational_function(&self) -> RationalFunction {
        RationalFunction {
            numerator: RationalPolynomial::one(),
            denominator: self.denominator.clone(),
        }
    }
}

/// Sample points for the direct cross-check of `det(I - uU)`.
const CHECK_POINTS: [(i64, i64); 3] = [(1, 2), (-2, 3), (3, 1)];

/// `det(I - uU) = u^{LN} f_N(1/u)`, i.e. the coefficient reversal of `f_N`.
///
/// For `LN <= 60` the result is compared with exact determinants of `I - uU` at a few
/// rational points.
pub fn walk_zeta(spec: &WalkSpec) -> Result<WalkZeta> {
    let f = full_charpoly(spec)?.product;
    let n = spec.dimension();
    let denominator = f.reversed(n);
    if !denominator.coeff(0).is_one() {
        return Err(Error::Internal(format!("det(I - uU) at u = 0 is not 1 for {spec}")));
    }
    let direct_checked = n <= DIRECT_CHECK_LIMIT;
    if direct_checked {
        let u = evolution_matrix(spec);
        for (num, den) in CHECK_POINTS {
            let t = Rational::new(num, den)?;
            let mut m = RationalMatrix::identity(n);
            for i in 0..n {
                for j in 0..n {
                    let e = &u.matrix()[(i, j)];
                    if !e.is_zero() {
                        m[(i, j)] -= &(&t * e);
                    }
                }
            }
            if m.determinant()? != denominator.eval(&t) {
                return Err(Error::Internal(format!(
                    "det(I - uU) differs from the reversed charpoly at u = {t} for {spec}"
                )));
            }
        }
    }
    Ok(WalkZeta {
        spec: *spec,
        denominator,
        direct_checked,
    })
}

/// `-(u-1)^{L-2} / ((u^2-1)^{L-1} (u^L-1)^{L-1})`, the closed form of the zeta function of
/// the M-type walk with `N = L`.
pub fn m_type_square_zeta(states: u32) -> RationalFunction {
    let l = states as usize;
    let x_minus = |k: usize| RationalPolynomial::x_pow_minus_one(k);
    let numerator = -&x_minus(1).pow(states - 2);
    let denominator = &x_minus(2).pow(states - 1) * &x_minus(l).pow(states - 1);
    RationalFunction {
        numerator,
        denominator,
    }
}
