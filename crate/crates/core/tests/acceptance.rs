//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p cyclewalk --test acceptance`.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::{binomial, evolution_by_definition, mat_pow, q, spec};
use cyclewalk::arith::{Rational, RationalMatrix, RationalPolynomial};
use cyclewalk::cyclotomic::CyclotomicElement;
use cyclewalk::period::{
    coprime_certificate, decide_period, fourth_power_check, l_squared_certificate,
    period_by_power, InfiniteCertificate, Verdict,
};
use cyclewalk::spectral::{
    check_coefficient_formulas, direct_charpoly, sector_charpoly, CycloPolynomial,
    DIRECT_CHECK_LIMIT,
};
use cyclewalk::walk::{Family, WalkSpec};
use cyclewalk::zeta::{
    absolute_zeta_descriptor, eval_zf_mellin, eval_zf_series, recognize_kurokawa, walk_zeta,
};

/// Wall-clock budgets.
const PERIOD_TABLE_BUDGET: Duration = Duration::from_secs(120);
const MELLIN_BUDGET: Duration = Duration::from_secs(60);
const VERIFY_BUDGET: Duration = Duration::from_secs(90);

/// Per-evaluator tolerance handed to the Mellin integral and to the subset series.
const MELLIN_TOL: f64 = 5e-5;
/// Largest accepted gap between the two evaluations.
const MELLIN_AGREEMENT: f64 = 1e-4;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn infinite_grid(family: Family) -> Vec<WalkSpec> {
    let mut out = Vec::new();
    for l in [3u32, 5, 7] {
        for n in (2..=12).filter(|&n| n != l) {
            out.push(spec(family, l, n));
        }
    }
    out
}

/// Least `t <= max` with `U^t = I` from repeated multiplication of the reference operator.
fn period_from_reference(s: &WalkSpec, max: u64) -> Option<u64> {
    let u = evolution_by_definition(s);
    let mut p = u.clone();
    for t in 1..=max {
        if p.is_identity() {
            return Some(t);
        }
        p = &p * &u;
    }
    None
}

fn period_table(family: Family, period: impl Fn(u32) -> u64) -> Outcome {
    let start = Instant::now();
    for l in [3u32, 5, 7, 9] {
        let s = spec(family, l, l);
        let t = period(l);
        let r = decide_period(&s).map_err(|e| e.to_string())?;
        ensure!(r.period() == Some(t), "{s}: verdict period {:?}, expected {t}", r.period());
        ensure!(period_by_power(&s, t) == Some(t), "{s}: power check does not give {t}");
        ensure!(period_from_reference(&s, t) == Some(t), "{s}: reference U^{t} != I");
    }
    for s in infinite_grid(family) {
        let r = decide_period(&s).map_err(|e| e.to_string())?;
        let Verdict::Infinite { certificate } = &r.verdict else {
            return Err(format!("{s}: expected an infinite period, got {:?}", r.period()));
        };
        let f = direct_charpoly(&evolution_by_definition(&s)).map_err(|e| e.to_string())?;
        match certificate {
            InfiniteCertificate::NonIntegerCoefficient { degree, value } => {
                ensure!(&f.coeff(*degree) == value, "{s}: certificate value not in det(xI - U)");
                ensure!(!value.is_integer(), "{s}: certificate value is integral");
            }
            InfiniteCertificate::NonCyclotomicRemainder { .. } => {
                ensure!(f.is_integer(), "{s}: remainder certificate on a non-integral polynomial");
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < PERIOD_TABLE_BUDGET, "took {elapsed:?}");
    Ok(format!("4 finite + 38 infinite cells, {elapsed:.1?}"))
}

fn criterion_1() -> Outcome {
    period_table(Family::M, |l| 2 * l as u64)
}

fn criterion_2() -> Outcome {
    period_table(Family::F, |_| 4)
}

fn criterion_3() -> Outcome {
    for l in [3u32, 5, 7] {
        let s = spec(Family::M, l, l);
        let zero = &RationalPolynomial::from_ints(&[-1, 1])
            * &RationalPolynomial::from_ints(&[1, 1]).pow(l - 1);
        let other = RationalPolynomial::x_pow_minus_one(l as usize);
        for k in 0..l {
            let want = if k == 0 { &zero } else { &other };
            let got = sector_charpoly(&s, k).map_err(|e| e.to_string())?;
            ensure!(
                got == CycloPolynomial::from_rational(l as u64, want),
                "{s}, k = {k}: got {got}"
            );
        }
    }
    Ok("L = 3, 5, 7, every sector".into())
}

fn sector_product(s: &WalkSpec) -> Result<RationalPolynomial, String> {
    let n = s.vertices() as u64;
    let mut acc = CycloPolynomial::from_rational(n, &RationalPolynomial::one());
    for k in 0..s.vertices() {
        let f = sector_charpoly(s, k).map_err(|e| e.to_string())?;
        acc = acc.checked_mul(&f).map_err(|e| e.to_string())?;
    }
    acc.to_rational()
        .ok_or_else(|| format!("{s}: sector product is not rational"))
}

/// `det(xI - U)` of the reference operator for every walk with `LN <= 60`.
fn reference_charpolys() -> &'static BTreeMap<WalkSpec, RationalPolynomial> {
    static CACHE: OnceLock<BTreeMap<WalkSpec, RationalPolynomial>> = OnceLock::new();
    CACHE.get_or_init(|| {
        WalkSpec::all_up_to_dimension(DIRECT_CHECK_LIMIT)
            .into_iter()
            .map(|s| (s, direct_charpoly(&evolution_by_definition(&s)).unwrap()))
            .collect()
    })
}

fn criterion_4() -> Outcome {
    let reference = reference_charpolys();
    for (s, f) in reference {
        ensure!(&sector_product(s)? == f, "{s}: sector product differs from det(xI - U)");
    }
    Ok(format!("{} walks with LN <= 60", reference.len()))
}

fn criterion_5() -> Outcome {
    let reference = reference_charpolys();
    let mut pairs = 0;
    for (big, f2) in reference {
        for d in (2..big.vertices()).filter(|d| big.vertices() % d == 0) {
            let small = spec(big.family(), big.states(), d);
            let f1 = &reference[&small];
            let (_, rem) = f2.divrem(f1).map_err(|e| e.to_string())?;
            ensure!(rem.is_zero(), "f for {small} does not divide f for {big}");
            pairs += 1;
        }
    }
    Ok(format!("{pairs} divisor pairs"))
}

/// `sum_{j in range} zeta^{jk}`.
fn power_sum(order: u64, k: u32, range: impl Iterator<Item = i64>) -> CyclotomicElement {
    range.fold(CyclotomicElement::zero(order), |acc, j| {
        &acc + &CyclotomicElement::root_power(order, j * k as i64).unwrap()
    })
}

fn criterion_6() -> Outcome {
    let mut cells = 0;
    let mut printed_disagreements = 0;
    for family in [Family::M, Family::F] {
        for l in [3u32, 5, 7] {
            let m = (l as i64 - 1) / 2;
            for n in 2..=8u32 {
                let s = spec(family, l, n);
                for k in 0..n {
                    let report = check_coefficient_formulas(&s, k).map_err(|e| e.to_string())?;
                    printed_disagreements += report.discrepancies().len();
                    // Independent recomputation of the x^0 and x^1 coefficients.
                    let order = n as u64;
                    let f = sector_charpoly(&s, k).map_err(|e| e.to_string())?;
                    let (constant, linear) = match family {
                        Family::M => (
                            q(-1, 1),
                            power_sum(order, k, -m..=m).scale(&q(-(2 * m - 1), l as i64)),
                        ),
                        Family::F => {
                            let sgn = if m % 2 == 0 { 1 } else { -1 };
                            let sum = power_sum(order, k, (-m..=m).filter(|&j| j != 0));
                            let inner = &sum.scale(&q(2, 1))
                                - &CyclotomicElement::from_rational(order, q(2 * m - 1, 1));
                            (q(-sgn, 1), inner.scale(&q(sgn, l as i64)))
                        }
                    };
                    ensure!(
                        f.coeff(0) == CyclotomicElement::from_rational(order, constant),
                        "{s}, k = {k}: constant term"
                    );
                    ensure!(f.coeff(1) == linear, "{s}, k = {k}: linear coefficient");
                    cells += 1;
                }
            }
        }
    }
    Ok(format!(
        "{cells} sectors; {printed_disagreements} printed variants disagree with the exact value"
    ))
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    for family in [Family::M, Family::F] {
        for l in [3i64, 5, 7] {
            let m = (l - 1) / 2;
            for n in (2..=12i64).filter(|n| num_integer::gcd(*n, l) == 1) {
                let s = spec(family, l as u32, n as u32);
                let qn = m / n;
                let parity = |e: i64| if e % 2 == 0 { 1 } else { -1 };
                let closed = match family {
                    Family::M => q(parity(n) * (2 * m - 1) * (2 * qn + 1) * n, l),
                    Family::F => q(parity(n * (m + 1)) * n * (2 * m - 1 - 4 * qn), l),
                };
                let f = direct_charpoly(&evolution_by_definition(&s)).map_err(|e| e.to_string())?;
                ensure!(f.coeff(1) == closed, "{s}: x^1 is {}, closed form {closed}", f.coeff(1));
                ensure!(!closed.is_integer(), "{s}: x^1 coefficient is an integer");
                let cert = coprime_certificate(&s).map_err(|e| e.to_string())?;
                ensure!(
                    cert.map(|c| c.closed_form) == Some(closed),
                    "{s}: library certificate differs"
                );
                count += 1;
            }
        }
    }
    Ok(format!("{count} coprime cells"))
}

fn criterion_8() -> Outcome {
    let mut values = Vec::new();
    for family in [Family::M, Family::F] {
        let s = spec(family, 3, 9);
        let f = direct_charpoly(&evolution_by_definition(&s)).map_err(|e| e.to_string())?;
        let c3 = f.coeff(3);
        ensure!(!c3.is_integer(), "{s}: x^3 coefficient {c3} is an integer");
        let cert = l_squared_certificate(family, 3).map_err(|e| e.to_string())?;
        ensure!(cert.value == c3 && cert.non_integer, "{s}: library certificate differs");
        values.push(format!("{family}: {c3}"));
    }
    Ok(format!("x^3 coefficients {}", values.join(", ")))
}

fn closed_form_zeta(l: u32) -> (RationalPolynomial, RationalPolynomial) {
    let x_minus = |k: usize| RationalPolynomial::x_pow_minus_one(k);
    let numerator = -&x_minus(1).pow(l - 2);
    let denominator = &x_minus(2).pow(l - 1) * &x_minus(l as usize).pow(l - 1);
    (numerator, denominator)
}

fn criterion_9() -> Outcome {
    for l in [3u32, 5, 7] {
        let s = spec(Family::M, l, l);
        let z = walk_zeta(&s).map_err(|e| e.to_string())?;
        let (num, den) = closed_form_zeta(l);
        // 1 / D = num / den  <=>  den = D * num
        ensure!(den == &z.denominator * &num, "L = {l}: zeta differs from the closed form");
        let u = evolution_by_definition(&s);
        for t in [q(1, 3), q(-3, 2)] {
            let mut m = RationalMatrix::identity(u.rows());
            for i in 0..u.rows() {
                for j in 0..u.cols() {
                    m[(i, j)] -= &(&t * &u[(i, j)]);
                }
            }
            let det = m.determinant().map_err(|e| e.to_string())?;
            ensure!(z.denominator.eval(&t) == det, "L = {l}: det(I - uU) at u = {t}");
        }
    }
    Ok("L = 3, 5, 7".into())
}

fn criterion_10() -> Outcome {
    for l in [3u32, 5, 7] {
        let s = spec(Family::M, l, l);
        let zeta = walk_zeta(&s).map_err(|e| e.to_string())?.as_rational_function();
        let form = recognize_kurokawa(&zeta).ok_or("walk zeta not recognized")?;
        let d = absolute_zeta_descriptor(&form).map_err(|e| e.to_string())?;
        let l2 = (l * l) as i64;
        let mut omega = vec![2u64; l as usize - 1];
        omega.extend(vec![l as u64; l as usize - 1]);
        ensure!(d.omega == omega, "L = {l}: omega {:?}", d.omega);
        ensure!(d.deg_f == Rational::from_int(-l2), "L = {l}: deg f = {}", d.deg_f);
        ensure!(d.d == -l2 && d.c == -1, "L = {l}: D = {}, C = {}", d.d, d.c);
        let want: Vec<(usize, u64, i64, i8)> = (0..=l as usize - 2)
            .map(|size| {
                let sign = if size % 2 == 0 { -1 } else { 1 };
                (size, binomial(l as u64 - 2, size as u64), l2 + size as i64, sign)
            })
            .collect();
        let mut got: Vec<(usize, u64, i64, i8)> = d
            .terms
            .iter()
            .map(|t| (t.subset_size, t.multiplicity, t.shift, t.sign))
            .collect();
        got.sort_unstable();
        ensure!(got == want, "L = {l}: terms {got:?}, expected {want:?}");
        ensure!(d.factor_lists_consistent(), "L = {l}: factor lists disagree");
    }
    Ok("L = 3, 5, 7".into())
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let zeta = walk_zeta(&spec(Family::M, 3, 3))
        .map_err(|e| e.to_string())?
        .as_rational_function();
    let form = recognize_kurokawa(&zeta).ok_or("walk zeta not recognized")?;
    let integral = eval_zf_mellin(&form, 6.0, 1.0, MELLIN_TOL).map_err(|e| e.to_string())?;
    let series = eval_zf_series(&form, 6.0, 1.0, MELLIN_TOL).map_err(|e| e.to_string())?;
    let gap = (integral - series).abs();
    let elapsed = start.elapsed();
    ensure!(gap < MELLIN_AGREEMENT, "Mellin {integral:e} vs series {series:e}");
    ensure!(elapsed < MELLIN_BUDGET, "took {elapsed:?}");
    Ok(format!("Mellin {integral:.6e}, series {series:.6e}, gap {gap:.1e}, {elapsed:.1?}"))
}

fn criterion_12() -> Outcome {
    for l in [3u32, 5, 7] {
        let s = spec(Family::F, l, l);
        ensure!(fourth_power_check(&s).map_err(|e| e.to_string())?, "{s}: sector check fails");
        let u = evolution_by_definition(&s);
        ensure!(mat_pow(&u, 4).is_identity(), "{s}: U^4 != I");
        ensure!(!mat_pow(&u, 2).is_identity(), "{s}: U^2 = I");
    }
    Ok("L = 3, 5, 7".into())
}

fn criterion_13() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_cyclewalk"))
        .arg("verify")
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let text = String::from_utf8_lossy(&out.stdout);
    for check in ["orthogonality", "cyclotomic_product", "field_axioms", "float_shadow"] {
        ensure!(
            text.lines().any(|l| l.starts_with(&format!("PASS {check} "))),
            "{check} not green:\n{text}"
        );
    }
    ensure!(out.status.code() == Some(0), "verify exited {:?}:\n{text}", out.status.code());
    ensure!(elapsed < VERIFY_BUDGET, "took {elapsed:?}");
    let summary = text.lines().last().unwrap_or_default().to_string();
    Ok(format!("{summary}, {elapsed:.1?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("period table, M-type", criterion_1),
        ("period table, F-type", criterion_2),
        ("square-case sector closed forms", criterion_3),
        ("sector product equals det(xI - U)", criterion_4),
        ("divisibility of charpolys", criterion_5),
        ("coefficient closed forms", criterion_6),
        ("coprime certificates", criterion_7),
        ("N = L^2 cubic certificates", criterion_8),
        ("walk zeta closed form", criterion_9),
        ("absolute-zeta descriptor", criterion_10),
        ("Mellin identity", criterion_11),
        ("F-type fourth power", criterion_12),
        ("structural suite via verify", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
        if outcome.is_err() {
            failed += 1;
        }
        let detail = outcome.unwrap_or_else(|e| e);
        println!(
            "[{status}] criterion {:>2}: {name} ({:.1?}) - {detail}",
            i + 1,
            start.elapsed()
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
