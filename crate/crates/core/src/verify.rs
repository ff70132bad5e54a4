//! The property suite behind the `verify` command.
//!
//! Every check runs exact arithmetic except the float shadow and the Mellin identity, whose
//! tolerances are the constants below.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{Rational, RationalPolynomial};
use crate::cyclotomic::{cyclotomic_polynomial, divisors, euler_phi, CyclotomicElement};
use crate::error::Result;
use crate::period::{
    coprime_certificate, decide_period, fourth_power_check, l_squared_certificate,
    period_by_power,
};
use crate::spectral::{
    check_coefficient_formulas, full_charpoly, sector_charpoly, unit_circle_deviation,
    CharPolyBundle, CycloPolynomial, DIRECT_CHECK_LIMIT,
};
use crate::walk::{evolution_matrix, Family, WalkSpec};
use crate::zeta::{
    absolute_zeta_descriptor, eval_zf_mellin, eval_zf_series, m_type_square_zeta,
    recognize_kurokawa, walk_zeta,
};

/// Largest `| |lambda| - 1 |` accepted for the floating eigenvalues of `U`.
pub const FLOAT_SHADOW_TOL: f64 = 1e-9;
/// Per-evaluator tolerance of the Mellin identity check.
pub const MELLIN_TOL: f64 = 5e-5;
/// Accepted gap between the Mellin integral and the subset series.
pub const MELLIN_AGREEMENT: f64 = 1e-4;

const FIELD_ORDERS: std::ops::RangeInclusive<u64> = 2..=12;
const FIELD_SAMPLES: usize = 16;
const FIELD_SEED: u64 = 0x5eed_c1c1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Number of cases examined.
    pub cases: usize,
    /// The first failure, or a short summary when all cases pass.
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Orthogonality, cyclotomic product identity, field axioms and the float shadow.
    Structural,
    /// The structural checks plus every exact statement about the two walk families.
    Full,
}

type CheckFn = fn() -> CheckOutcome;

const STRUCTURAL: [(&str, CheckFn); 5] = [
    ("orthogonality", orthogonality),
    ("block_circulant", block_circulant),
    ("cyclotomic_product", cyclotomic_product),
    ("field_axioms", field_axioms),
    ("float_shadow", float_shadow),
];

const EXACT_CHECKS: [(&str, CheckFn); 11] = [
    ("sector_product", sector_product),
    ("divisibility", divisibility),
    ("square_sectors", square_sectors),
    ("coefficient_formulas", coefficient_formulas),
    ("coprime_certificates", coprime_certificates),
    ("cubic_certificates", cubic_certificates),
    ("fourth_power", fourth_power),
    ("period_table", period_table),
    ("walk_zeta_closed_form", walk_zeta_closed_form),
    ("absolute_zeta_descriptor", descriptor_check),
    ("mellin_identity", mellin_identity),
];

/// Names of the checks in a suite, in run order.
pub fn check_names(suite: Suite) -> Vec<&'static str> {
    checks(suite).map(|(name, _)| name).collect()
}

fn checks(suite: Suite) -> impl Iterator<Item = (&'static str, CheckFn)> {
    let extra: &[(&str, CheckFn)] = match suite {
        Suite::Structural => &[],
        Suite::Full => &EXACT_CHECKS,
    };
    STRUCTURAL.iter().chain(extra).copied()
}

/// Runs a suite sequentially; each check parallelizes over its own cases.
pub fn run_suite(suite: Suite) -> Vec<(CheckOutcome, Duration)> {
    run_selected(suite, &[])
}

/// Runs the checks of `suite` whose names are listed, or all of them when `names` is empty.
pub fn run_selected(suite: Suite, names: &[String]) -> Vec<(CheckOutcome, Duration)> {
    checks(suite)
        .filter(|(name, _)| names.is_empty() || names.iter().any(|n| n == name))
        .map(|(_, f)| {
            let start = Instant::now();
            let outcome = f();
            (outcome, start.elapsed())
        })
        .collect()
}

fn outcome(name: &str, cases: usize, failures: Vec<String>, summary: &str) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        passed: failures.is_empty(),
        cases,
        detail: failures
            .into_iter()
            .next()
            .unwrap_or_else(|| summary.to_string()),
    }
}

/// Runs `f` over `cases` in parallel and collects failure messages in case order.
fn over<T: Sync>(cases: &[T], f: impl Fn(&T) -> Result<Option<String>> + Sync) -> Vec<String> {
    cases
        .par_iter()
        .map(|c| match f(c) {
            Ok(failure) => failure,
            Err(e) => Some(e.to_string()),
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn small_specs() -> Vec<WalkSpec> {
    WalkSpec::all_up_to_dimension(DIRECT_CHECK_LIMIT)
}

fn spec(family: Family, states: u32, vertices: u32) -> WalkSpec {
    WalkSpec::new(family, states, vertices).expect("valid walk parameters")
}

fn orthogonality() -> CheckOutcome {
    let specs = small_specs();
    let failures = over(&specs, |s| {
        let u = evolution_matrix(s);
        let m = u.matrix();
        if !(&m.transpose() * m).is_identity() {
            return Ok(Some(format!("U^T U != I for {s}")));
        }
        let l = s.states() as usize;
        let sparse = (0..u.dimension())
            .all(|i| m.nonzeros_in_row(i) == l && m.nonzeros_in_col(i) == l);
        Ok((!sparse).then(|| format!("a row or column of U for {s} lacks exactly L nonzeros")))
    });
    outcome("orthogonality", specs.len(), failures, "U^T U = I, L nonzeros per line")
}

fn block_circulant() -> CheckOutcome {
    let specs = small_specs();
    let failures = over(&specs, |s| {
        let u = evolution_matrix(s);
        let n = s.vertices() as usize;
        let first: Vec<_> = (0..n).map(|w| u.block(0, w)).collect();
        for v in 0..n {
            for w in 0..n {
                if u.block(v, w) != first[(w + n - v) % n] {
                    return Ok(Some(format!("block ({v}, {w}) of {s} breaks circulance")));
                }
            }
        }
        Ok(None)
    });
    outcome("block_circulant", specs.len(), failures, "blocks depend on w - v only")
}

fn cyclotomic_product() -> CheckOutcome {
    let ns: Vec<u64> = (1..=60).collect();
    let failures = over(&ns, |&n| {
        let mut acc = RationalPolynomial::one();
        for d in divisors(n) {
            acc = &acc * &cyclotomic_polynomial(d)?;
        }
        Ok((acc != RationalPolynomial::x_pow_minus_one(n as usize))
            .then(|| format!("prod of Phi_d over d | {n} is not x^{n} - 1")))
    });
    outcome("cyclotomic_product", ns.len(), failures, "prod_{d|n} Phi_d = x^n - 1")
}

fn random_element(rng: &mut StdRng, order: u64) -> CyclotomicElement {
    let deg = euler_phi(order) as usize;
    let coeffs = (0..deg)
        .map(|_| Rational::new(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=7)).unwrap())
        .collect();
    CyclotomicElement::new(order, RationalPolynomial::new(coeffs)).unwrap()
}

fn field_axioms() -> CheckOutcome {
    let mut rng = StdRng::seed_from_u64(FIELD_SEED);
    let samples: Vec<_> = FIELD_ORDERS
        .flat_map(|n| std::iter::repeat_n(n, FIELD_SAMPLES))
        .map(|n| {
            let triple = [
                random_element(&mut rng, n),
                random_element(&mut rng, n),
                random_element(&mut rng, n),
            ];
            (n, triple)
        })
        .collect();
    let failures = over(&samples, |(n, [a, b, c])| {
        let one = CyclotomicElement::one(*n);
        let zero = CyclotomicElement::zero(*n);
        let mut broken = Vec::new();
        if &(a + b) + c != a + &(b + c) || a + b != b + a {
            broken.push("addition");
        }
        if &(a * b) * c != a * &(b * c) || a * b != b * a || a * &one != *a {
            broken.push("multiplication");
        }
        if a * &(b + c) != &(a * b) + &(a * c) {
            broken.push("distributivity");
        }
        if a - &a.clone() != zero || a + &(-a) != zero {
            broken.push("negation");
        }
        if !a.is_zero() && a * &a.inverse()? != one {
            broken.push("inverse");
        }
        if (a * b).conjugate() != &a.conjugate() * &b.conjugate() || a.conjugate().conjugate() != *a {
            broken.push("conjugation");
        }
        Ok((!broken.is_empty()).then(|| format!("Q(zeta_{n}): {} fails", broken.join(", "))))
    });
    outcome("field_axioms", samples.len(), failures, "field laws hold in Q(zeta_N), N = 2..12")
}

fn float_shadow() -> CheckOutcome {
    let specs = small_specs();
    let failures = over(&specs, |s| {
        let dev = unit_circle_deviation(s);
        Ok((dev >= FLOAT_SHADOW_TOL).then(|| format!("{s}: eigenvalue off the unit circle by {dev:e}")))
    });
    outcome("float_shadow", specs.len(), failures, "all eigenvalues on |z| = 1 within 1e-9")
}

/// `f_N` for every walk with `LN <= 60`, computed once per process and shared between checks.
fn small_products() -> &'static BTreeMap<WalkSpec, std::result::Result<CharPolyBundle, String>> {
    static PRODUCTS: OnceLock<BTreeMap<WalkSpec, std::result::Result<CharPolyBundle, String>>> =
        OnceLock::new();
    PRODUCTS.get_or_init(|| {
        small_specs()
            .par_iter()
            .map(|s| (*s, full_charpoly(s).map_err(|e| e.to_string())))
            .collect()
    })
}

fn sector_product() -> CheckOutcome {
    let products = small_products();
    let failures = products
        .iter()
        .filter_map(|(s, b)| match b {
            Ok(b) if b.direct_checked => None,
            Ok(_) => Some(format!("{s} skipped the direct determinant")),
            Err(e) => Some(e.clone()),
        })
        .collect();
    outcome("sector_product", products.len(), failures, "prod_k f_{N,k} = det(xI - U) for LN <= 60")
}

fn divisibility() -> CheckOutcome {
    let products = small_products();
    let mut pairs = Vec::new();
    for s in products.keys() {
        for d in divisors(s.vertices() as u64).into_iter().filter(|&d| d >= 2) {
            if d != s.vertices() as u64 {
                pairs.push((spec(s.family(), s.states(), d as u32), *s));
            }
        }
    }
    let failures = over(&pairs, |(small, big)| {
        let (Some(Ok(p)), Some(Ok(q))) = (products.get(small), products.get(big)) else {
            return Ok(Some(format!("missing charpoly for {small} or {big}")));
        };
        Ok(q.product
            .exact_div(&p.product)?
            .is_none()
            .then(|| format!("f for {small} does not divide f for {big}")))
    });
    outcome("divisibility", pairs.len(), failures, "f_{N1} | f_{N2} whenever N1 | N2")
}

fn square_sectors() -> CheckOutcome {
    let cases: Vec<(u32, u32)> = [3, 5, 7]
        .into_iter()
        .flat_map(|l| (0..l).map(move |k| (l, k)))
        .collect();
    let failures = over(&cases, |&(l, k)| {
        let s = spec(Family::M, l, l);
        let want = if k == 0 {
            &RationalPolynomial::from_ints(&[-1, 1]) * &RationalPolynomial::from_ints(&[1, 1]).pow(l - 1)
        } else {
            RationalPolynomial::x_pow_minus_one(l as usize)
        };
        let got = sector_charpoly(&s, k)?;
        Ok((got != CycloPolynomial::from_rational(l as u64, &want))
            .then(|| format!("sector {k} of {s} is {got}")))
    });
    outcome("square_sectors", cases.len(), failures, "f_{L,0} = (x-1)(x+1)^{L-1}, f_{L,k} = x^L - 1")
}

fn coefficient_formulas() -> CheckOutcome {
    let mut cases = Vec::new();
    for family in [Family::M, Family::F] {
        for l in [3, 5, 7] {
            for n in 2..=8 {
                for k in 0..n {
                    cases.push((spec(family, l, n), k));
                }
            }
        }
    }
    let failures = over(&cases, |(s, k)| {
        let report = check_coefficient_formulas(s, *k)?;
        let broken_claim = report
            .families
            .iter()
            .any(|f| matches!(f.claim, Some((_, false))));
        Ok(broken_claim.then(|| format!("integer family claim fails for {s}, k = {k}")))
    });
    outcome("coefficient_formulas", cases.len(), failures, "x^0..x^3 closed forms match")
}

fn coprime_certificates() -> CheckOutcome {
    let mut cases = Vec::new();
    for family in [Family::M, Family::F] {
        for l in [3u32, 5, 7] {
            for n in 2..=12u32 {
                if num_integer::gcd(l, n) == 1 {
                    cases.push(spec(family, l, n));
                }
            }
        }
    }
    let failures = over(&cases, |s| {
        Ok(coprime_certificate(s)?
            .is_none()
            .then(|| format!("no certificate for {s}")))
    });
    outcome("coprime_certificates", cases.len(), failures, "closed-form x^1 matches, non-integral")
}

fn cubic_certificates() -> CheckOutcome {
    let cases = [Family::M, Family::F];
    let failures = over(&cases, |&family| {
        let c = l_squared_certificate(family, 3)?;
        Ok((!c.non_integer).then(|| format!("x^3 coefficient of {} is integral", c.spec)))
    });
    outcome("cubic_certificates", cases.len(), failures, "x^3 coefficient of f_{L^2} is not an integer")
}

fn fourth_power() -> CheckOutcome {
    let cases = [3u32, 5, 7];
    let failures = over(&cases, |&l| {
        let s = spec(Family::F, l, l);
        Ok((!fourth_power_check(&s)?).then(|| format!("(Z^k A)^4 != I for {s}")))
    });
    outcome("fourth_power", cases.len(), failures, "(Z^k A)^4 = I for every k")
}

fn period_table() -> CheckOutcome {
    let mut cases = Vec::new();
    for family in [Family::M, Family::F] {
        for l in [3u32, 5, 7, 9] {
            let t = match family {
                Family::M => 2 * l as u64,
                Family::F => 4,
            };
            cases.push((spec(family, l, l), Some(t)));
        }
        for l in [3u32, 5, 7] {
            for n in (2..=12).filter(|&n| n != l) {
                cases.push((spec(family, l, n), None));
            }
        }
    }
    let failures = over(&cases, |(s, want)| {
        let r = decide_period(s)?;
        if r.period() != *want {
            return Ok(Some(format!("{s}: period {:?}, expected {want:?}", r.period())));
        }
        if let Some(t) = want {
            if period_by_power(s, *t) != Some(*t) {
                return Ok(Some(format!("{s}: U^{t} != I or a smaller power is I")));
            }
        }
        Ok(None)
    });
    outcome("period_table", cases.len(), failures, "T = 2L (M), 4 (F) at N = L; infinite otherwise")
}

fn walk_zeta_closed_form() -> CheckOutcome {
    let cases = [3u32, 5, 7];
    let failures = over(&cases, |&l| {
        let z = walk_zeta(&spec(Family::M, l, l))?;
        Ok((!z.as_rational_function().equivalent(&m_type_square_zeta(l)))
            .then(|| format!("zeta for L = {l} differs from the closed form")))
    });
    outcome("walk_zeta_closed_form", cases.len(), failures, "zeta = -(u-1)^{L-2}/((u^2-1)^{L-1}(u^L-1)^{L-1})")
}

fn descriptor_check() -> CheckOutcome {
    let cases = [3u32, 5, 7];
    let failures = over(&cases, |&l| {
        let form = recognize_kurokawa(&m_type_square_zeta(l));
        let Some(form) = form else {
            return Ok(Some(format!("L = {l}: closed form not recognized")));
        };
        let d = absolute_zeta_descriptor(&form)?;
        let l2 = (l * l) as i64;
        let mut omega = vec![2u64; l as usize - 1];
        omega.extend(std::iter::repeat_n(l as u64, l as usize - 1));
        let terms_ok = d.terms.iter().all(|t| {
            t.shift == l2 + t.subset_size as i64
                && t.sign == if t.subset_size % 2 == 0 { -1 } else { 1 }
        });
        let ok = d.omega == omega
            && d.deg_f == Rational::from_int(-l2)
            && d.d == -l2
            && d.c == -1
            && terms_ok
            && d.factor_lists_consistent();
        Ok((!ok).then(|| format!("L = {l}: descriptor {}", d.render())))
    });
    outcome("absolute_zeta_descriptor", cases.len(), failures, "shifts s + L^2 + |I|, deg = D = -L^2, C = -1")
}

fn mellin_identity() -> CheckOutcome {
    let run = || -> Result<Option<String>> {
        let form = recognize_kurokawa(&m_type_square_zeta(3)).expect("L = 3 closed form");
        let integral = eval_zf_mellin(&form, 6.0, 1.0, MELLIN_TOL)?;
        let series = eval_zf_series(&form, 6.0, 1.0, MELLIN_TOL)?;
        let gap = (integral - series).abs();
        Ok((gap >= MELLIN_AGREEMENT).then(|| format!("Mellin {integral:e} vs series {series:e}")))
    };
    let failures = match run() {
        Ok(f) => f.into_iter().collect(),
        Err(e) => vec![e.to_string()],
    };
    outcome("mellin_identity", 1, failures, "Mellin integral matches subset series at w = 6, s = 1")
}
