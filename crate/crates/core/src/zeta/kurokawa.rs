use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::RationalFunction;
use crate::arith::{Rational, RationalPolynomial};
use crate::cyclotomic::{divisors, strip_cyclotomic_factors};
use crate::error::{Error, Result};

/// Largest number of numerator factors accepted by [`absolute_zeta_descriptor`].
pub const MAX_SUBSET_FACTORS: usize = 20;

/// `sign * x^{l/2} * prod_i (x^{m_i} - 1) / prod_j (x^{n_j} - 1)` with `l` even.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KurokawaForm {
    pub sign: i8,
    pub l: i64,
    pub m_list: Vec<u64>,
    pub n_list: Vec<u64>,
}

impl KurokawaForm {
    /// The explicit formula needs `a >= 1` and `b >= 1`; the sign is carried by the descriptor.
    pub fn is_admissible(&self) -> bool {
        !self.m_list.is_empty() && !self.n_list.is_empty()
    }

    /// Multiplies the form back out.
    pub fn expand(&self) -> RationalFunction {
        let half = self.l / 2;
        let mut num = RationalPolynomial::monomial(
            Rational::from_int(self.sign as i64),
            half.max(0) as usize,
        );
        for &m in &self.m_list {
            num = &num * &RationalPolynomial::x_pow_minus_one(m as usize);
        }
        let mut den = RationalPolynomial::monomial(Rational::one(), (-half).max(0) as usize);
        for &n in &self.n_list {
            den = &den * &RationalPolynomial::x_pow_minus_one(n as usize);
        }
        RationalFunction {
            numerator: num,
            denominator: den,
        }
    }

    /// `deg f = l/2 + sum m - sum n`.
    pub fn degree(&self) -> i64 {
        self.l / 2 + self.m_list.iter().sum::<u64>() as i64 - self.n_list.iter().sum::<u64>() as i64
    }
}

impl std::fmt::Display for KurokawaForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let product = |list: &[u64]| {
            if list.is_empty() {
                return "1".to_string();
            }
            list.iter()
                .map(|&k| match k {
                    1 => "(x-1)".to_string(),
                    k => format!("(x^{k}-1)"),
                })
                .collect::<Vec<_>>()
                .join("")
        };
        let sign = if self.sign < 0 { "-" } else { "" };
        let power = match self.l {
            0 => String::new(),
            l if l % 2 == 0 => format!("x^{} ", l / 2),
            l => format!("x^({l}/2) "),
        };
        write!(f, "{sign}{power}{} / {}", product(&self.m_list), product(&self.n_list))
    }
}

/// Splits `p` as `c * x^e * q` with `q(0) != 0`.
fn strip_monomial(p: &RationalPolynomial) -> (usize, RationalPolynomial) {
    let e = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    (e, RationalPolynomial::new(p.coeffs()[e..].to_vec()))
}

/// Leading coefficient and cyclotomic multiplicities of `p`, or `None` if something
/// non-cyclotomic is left.
fn cyclotomic_exponents(p: &RationalPolynomial) -> Result<Option<(Rational, BTreeMap<u64, u32>)>> {
    let lead = p.leading().cloned().ok_or(Error::DivisionByZeroPolynomial)?;
    let monic = p.scale(&lead.recip()?);
    let cert = strip_cyclotomic_factors(&monic)?;
    Ok(cert.is_complete().then_some((lead, cert.factors)))
}

/// Recognizes `r` as a Kurokawa form.
///
/// Monomial factors are removed first. Numerator and denominator are then split into
/// cyclotomic factors, and the net multiplicity `e_d` of each `Phi_d` is written as
/// `sum_{d | k} c_k` with `c_k` the net power of `x^k - 1`, solved from the largest `d`
/// down. Returns `None` when a non-cyclotomic factor remains or the leading coefficients
/// do not give a sign of `+-1`.
pub fn recognize_kurokawa(r: &RationalFunction) -> Option<KurokawaForm> {
    if r.numerator.is_zero() || r.denominator.is_zero() {
        return None;
    }
    let (ep, num) = strip_monomial(&r.numerator);
    let (eq, den) = strip_monomial(&r.denominator);
    let (lead_p, fp) = cyclotomic_exponents(&num).ok()??;
    let (lead_q, fq) = cyclotomic_exponents(&den).ok()??;
    let sign = &lead_p / &lead_q;
    let sign = match sign.to_i64() {
        Some(1) => 1,
        Some(-1) => -1,
        _ => return None,
    };
    // Every x^k - 1 is monic, so the sign is the ratio of leading coefficients.
    let mut net: BTreeMap<u64, i64> = BTreeMap::new();
    for (&d, &e) in &fp {
        *net.entry(d).or_default() += e as i64;
    }
    for (&d, &e) in &fq {
        *net.entry(d).or_default() -= e as i64;
    }
    let mut powers: BTreeMap<u64, i64> = BTreeMap::new();
    while let Some((&d, &e)) = net.iter().next_back() {
        net.remove(&d);
        if e == 0 {
            continue;
        }
        powers.insert(d, e);
        for k in divisors(d).into_iter().filter(|&k| k < d) {
            *net.entry(k).or_default() -= e;
        }
    }
    let mut m_list = Vec::new();
    let mut n_list = Vec::new();
    for (&k, &c) in &powers {
        let target = if c > 0 { &mut m_list } else { &mut n_list };
        target.extend(std::iter::repeat_n(k, c.unsigned_abs() as usize));
    }
    let form = KurokawaForm {
        sign,
        l: 2 * (ep as i64 - eq as i64),
        m_list,
        n_list,
    };
    debug_assert!(form.expand().equivalent(r));
    Some(form)
}

/// All subsets `I` with the same size and the same `m(I)`, collapsed into one term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetTerm {
    pub subset_size: usize,
    pub multiplicity: u64,
    /// `m(I)`
    pub m_sum: u64,
    /// The multiple zeta is evaluated at `s + shift`, `shift = -deg f + m(I)`.
    pub shift: i64,
    /// `form sign * (-1)^{|I|}`
    pub sign: i8,
}

/// A formal factor `name_b(s + shift, omega)^{exponent}`, repeated `multiplicity` times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub function: String,
    pub shift: i64,
    pub exponent: i8,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsZetaDescriptor {
    pub form: KurokawaForm,
    pub terms: Vec<SubsetTerm>,
    pub omega: Vec<u64>,
    pub deg_f: Rational,
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "C")]
    pub c: i8,
    /// Factors of `zeta_f(s)`.
    pub gamma_factors: Vec<FactorRecord>,
    /// Factors of `epsilon_f(s)` in `zeta_f(D - s)^C = epsilon_f(s) zeta_f(s)`.
    pub sine_factors: Vec<FactorRecord>,
}

impl AbsZetaDescriptor {
    /// `sum over terms of sign * multiplicity`; zero whenever `a >= 1`.
    pub fn signed_count(&self) -> i64 {
        self.terms
            .iter()
            .map(|t| t.sign as i64 * t.multiplicity as i64)
            .sum()
    }

    /// The gamma and sine factor lists carry the same `(shift, exponent, multiplicity)`
    /// multiset as the subset terms.
    pub fn factor_lists_consistent(&self) -> bool {
        let key = |f: &FactorRecord| (f.shift, f.exponent, f.multiplicity);
        let mut g: Vec<_> = self.gamma_factors.iter().map(key).collect();
        let mut s: Vec<_> = self.sine_factors.iter().map(key).collect();
        let mut t: Vec<_> = self
            .terms
            .iter()
            .map(|t| (t.shift, t.sign, t.multiplicity))
            .collect();
        g.sort_unstable();
        s.sort_unstable();
        t.sort_unstable();
        g == s && s == t
    }

    /// Text rendering of `Z_f`, `zeta_f` and the functional equation.
    pub fn render(&self) -> String {
        let b = self.omega.len();
        let omega = self
            .omega
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let arg = |shift: i64| match shift {
            0 => "s".to_string(),
            k if k > 0 => format!("s+{k}"),
            k => format!("s{k}"),
        };
        let mut z = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let op = match (i, t.sign) {
                (0, 1) => "",
                (0, _) => "-",
                (_, 1) => " + ",
                _ => " - ",
            };
            let mult = if t.multiplicity == 1 {
                String::new()
            } else {
                format!("{} ", t.multiplicity)
            };
            let _ = write!(z, "{op}{mult}zeta_{b}(w, {}, ({omega}))", arg(t.shift));
        }
        let factors = |list: &[FactorRecord], name: &str| {
            list.iter()
                .map(|f| {
                    let e = f.exponent as i64 * f.multiplicity as i64;
                    format!("{name}_{b}({}, ({omega}))^{e}", arg(f.shift))
                })
                .collect::<Vec<_>>()
                .join(" * ")
        };
        format!(
            "Z_f(w,s) = {z}\nzeta_f(s) = {}\nzeta_f({}-s)^({}) = epsilon_f(s) zeta_f(s), epsilon_f(s) = {}\ndeg(f) = {}, D = {}, C = {}",
            factors(&self.gamma_factors, "Gamma"),
            self.d,
            self.c,
            factors(&self.sine_factors, "S"),
            self.deg_f,
            self.d,
            self.c
        )
    }
}

/// Subset expansion of the explicit absolute-zeta formula for a Kurokawa form.
pub fn absolute_zeta_descriptor(form: &KurokawaForm) -> Result<AbsZetaDescriptor> {
    if form.n_list.is_empty() {
        return Err(Error::Precondition(
            "the denominator must contain at least one factor".into(),
        ));
    }
    if form.m_list.len() > MAX_SUBSET_FACTORS {
        return Err(Error::Precondition(format!(
            "at most {MAX_SUBSET_FACTORS} numerator factors, got {}",
            form.m_list.len()
        )));
    }
    if form.l % 2 != 0 || form.sign.abs() != 1 {
        return Err(Error::Precondition("l must be even and sign +-1".into()));
    }
    let a = form.m_list.len() as i64;
    let b = form.n_list.len() as i64;
    let sum_m = form.m_list.iter().sum::<u64>() as i64;
    let sum_n = form.n_list.iter().sum::<u64>() as i64;
    let deg = form.degree();
    // counts[(|I|, m(I))] = number of subsets, by a knapsack over the factors.
    let mut counts: BTreeMap<(usize, u64), u64> = BTreeMap::from([((0, 0), 1)]);
    for &m in &form.m_list {
        let mut next = counts.clone();
        for (&(size, sum), &c) in &counts {
            *next.entry((size + 1, sum + m)).or_default() += c;
        }
        counts = next;
    }
    let terms: Vec<SubsetTerm> = counts
        .into_iter()
        .map(|((size, m_sum), multiplicity)| SubsetTerm {
            subset_size: size,
            multiplicity,
            m_sum,
            shift: m_sum as i64 - deg,
            sign: form.sign * if size % 2 == 0 { 1 } else { -1 },
        })
        .collect();
    let records = |function: &str| {
        terms
            .iter()
            .map(|t| FactorRecord {
                function: function.into(),
                shift: t.shift,
                exponent: t.sign,
                multiplicity: t.multiplicity,
            })
            .collect::<Vec<_>>()
    };
    Ok(AbsZetaDescriptor {
        form: form.clone(),
        gamma_factors: records("Gamma"),
        sine_factors: records("S"),
        terms,
        omega: form.n_list.clone(),
        deg_f: Rational::from_int(deg),
        d: form.l + sum_m - sum_n,
        c: if (a - b) % 2 == 0 { 1 } else { -1 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::m_type_square_zeta;

    fn poly(c: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_ints(c)
    }

    #[test]
    fn walk_form_l3() {
        let f = recognize_kurokawa(&m_type_square_zeta(3)).unwrap();
        assert_eq!(
            f,
            KurokawaForm {
                sign: -1,
                l: 0,
                m_list: vec![1],
                n_list: vec![2, 2, 3, 3]
            }
        );
        assert!(f.is_admissible());
        let d = absolute_zeta_descriptor(&f).unwrap();
        assert_eq!(d.deg_f, Rational::from_int(-9));
        assert_eq!((d.d, d.c), (-9, -1));
        let shifts: Vec<(i64, i8)> = d.terms.iter().map(|t| (t.shift, t.sign)).collect();
        assert_eq!(shifts, vec![(9, -1), (10, 1)]);
        assert_eq!(d.signed_count(), 0);
        assert!(d.factor_lists_consistent());
    }

    #[test]
    fn plain_x_minus_one_is_not_admissible() {
        let r = RationalFunction::new(poly(&[-1, 1]), poly(&[1])).unwrap();
        let f = recognize_kurokawa(&r).unwrap();
        assert_eq!((f.sign, f.l, f.m_list.clone()), (1, 0, vec![1]));
        assert!(f.n_list.is_empty());
        assert!(!f.is_admissible());
        assert!(absolute_zeta_descriptor(&f).is_err());
    }

    #[test]
    fn quotient_of_binomials() {
        let r = RationalFunction::new(poly(&[-1, 0, 0, 0, 0, 0, 1]), poly(&[-1, 0, 1])).unwrap();
        let f = recognize_kurokawa(&r).unwrap();
        assert_eq!((f.m_list.clone(), f.n_list.clone()), (vec![6], vec![2]));
        assert!(f.expand().equivalent(&RationalFunction::new(poly(&[1, 0, 1, 0, 1]), poly(&[1])).unwrap()));
    }

    #[test]
    fn monomials_and_rejections() {
        // x^2 (x - 1) / x^3 -> l = -2
        let r = RationalFunction::new(poly(&[0, 0, -1, 1]), poly(&[0, 0, 0, 1])).unwrap();
        assert_eq!(recognize_kurokawa(&r).unwrap().l, -2);
        let r = RationalFunction::new(poly(&[-2, 0, 1]), poly(&[1])).unwrap();
        assert!(recognize_kurokawa(&r).is_none());
        let r = RationalFunction::new(poly(&[-2, 2]), poly(&[1])).unwrap();
        assert!(recognize_kurokawa(&r).is_none());
    }
}
