//! Floating-point evaluation of multiple Hurwitz zeta values and of `Z_f(w, s)` as a Mellin
//! integral, each with an explicit error budget.

// Guards are written as `!(x > 0.0)` so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use statrs::function::gamma::{gamma, gamma_ur};

use super::kurokawa::{absolute_zeta_descriptor, KurokawaForm};
use crate::error::{Error, Result};

/// Upper end of the interval handled by power series in the Mellin integral. It is reduced
/// to `1 / max(n_j)` when needed to stay inside the series' radius of convergence.
pub const MELLIN_SPLIT: f64 = 0.25;

/// Cap on enumerated lattice points before a tolerance is declared unreachable.
const MAX_LATTICE_POINTS: f64 = 2e8;

/// Compensated (Neumaier) summation.
#[derive(Default)]
struct Accumulator {
    sum: f64,
    carry: f64,
}

impl Accumulator {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn precondition(msg: String) -> Error {
    Error::Precondition(msg)
}

/// Adds `(x + base + n . omega)^{-w}` over all lattice points with `base + n . omega <= bound`.
fn lattice_sum(acc: &mut Accumulator, w: f64, x: f64, omega: &[f64], base: f64, bound: f64) {
    let (first, rest) = omega.split_first().expect("non-empty");
    let mut partial = base;
    while partial <= bound {
        if rest.is_empty() {
            acc.add((x + partial).powf(-w));
        } else {
            lattice_sum(acc, w, x, rest, partial, bound);
        }
        partial += first;
    }
}

/// `zeta_r(w, x, omega) = sum_{n >= 0} (n . omega + x)^{-w}` with `|error| < tol`.
///
/// Lattice points are enumerated up to `n . omega + x <= R`. The tail beyond `R` is at most
/// `w (1 + S/R)^r R^{r-w} / (r! prod(omega) (w - r))` with `S = sum(omega)`, and `R` is doubled
/// until that is below `tol / 2`. In one dimension the tail is bracketed by integrals and the
/// midpoint is added instead.
pub fn eval_multiple_hurwitz(w: f64, x: f64, omega: &[u64], tol: f64) -> Result<f64> {
    let r = omega.len();
    if r == 0 || omega.contains(&0) {
        return Err(precondition("omega must be non-empty with entries >= 1".into()));
    }
    if !(w > r as f64) {
        return Err(precondition(format!("w = {w} must exceed r = {r}")));
    }
    if !(x > 0.0) || !(tol > 0.0) {
        return Err(precondition("x and tol must be positive".into()));
    }
    let om: Vec<f64> = omega.iter().map(|&o| o as f64).collect();

    if r == 1 {
        let o = om[0];
        let terms = ((tol.powf(-1.0 / w) - x) / o).ceil().max(1.0);
        if terms > MAX_LATTICE_POINTS {
            return Err(precondition(format!("tolerance {tol} needs too many terms")));
        }
        let last = terms as u64;
        let mut acc = Accumulator::default();
        for n in 0..=last {
            acc.add((n as f64 * o + x).powf(-w));
        }
        let tail_from = |a: f64| (a * o + x).powf(1.0 - w) / (o * (w - 1.0));
        acc.add(0.5 * (tail_from(last as f64) + tail_from(last as f64 + 1.0)));
        return Ok(acc.value());
    }

    let s: f64 = om.iter().sum();
    let prod: f64 = om.iter().product();
    let fact: f64 = (1..=r).map(|k| k as f64).product();
    let bound = |big_r: f64| {
        w * (1.0 + s / big_r).powi(r as i32) * big_r.powf(r as f64 - w)
            / (fact * prod * (w - r as f64))
    };
    let mut big_r = x + s + 1.0;
    while bound(big_r) >= tol / 2.0 {
        big_r *= 2.0;
    }
    if (big_r + s).powi(r as i32) / (fact * prod) > MAX_LATTICE_POINTS {
        return Err(precondition(format!("tolerance {tol} needs too many lattice points")));
    }
    let mut acc = Accumulator::default();
    lattice_sum(&mut acc, w, x, &om, 0.0, big_r - x);
    Ok(acc.value())
}

/// Truncated power series helpers, coefficients ascending in `t`.
fn series_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let k = a.len();
    (0..k)
        .map(|i| (0..=i).map(|j| a[j] * b[i - j]).sum())
        .collect()
}

fn series_recip(a: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; a.len()];
    r[0] = 1.0 / a[0];
    for i in 1..a.len() {
        let s: f64 = (1..=i).map(|j| a[j] * r[i - j]).sum();
        r[i] = -s / a[0];
    }
    r
}

/// `expm1(c t) / t`
fn expm1_over_t(c: f64, k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k);
    let mut term = c;
    for i in 0..k {
        out.push(term);
        term *= c / (i + 2) as f64;
    }
    out
}

/// `exp(c t)`
fn exp_series(c: f64, k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k);
    let mut term = 1.0;
    for i in 0..k {
        out.push(term);
        term *= c / (i + 1) as f64;
    }
    out
}

/// `ln(e^x - 1)` for `x > 0`, without overflow.
fn ln_expm1(x: f64) -> f64 {
    if x > 30.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        x.exp_m1().ln()
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
        + adaptive_simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

/// `Z_f(w, s) = (1 / Gamma(w)) int_0^inf f(e^t) e^{-st} t^{w-1} dt`.
///
/// On `[0, t0]` the factor `t^{a-b}` is pulled out of `f(e^t)` and the rest is integrated
/// term by term as a power series. On `[t0, T]` adaptive Simpson is used, with `f(e^t)`
/// evaluated in log space. `T` is chosen so that the tail, bounded by
/// `K Q(w, cT) / c^w` with `c = s - deg f` and `K = prod 1/(1 - e^{-n_j t0})`, is below `tol/4`.
pub fn eval_zf_mellin(form: &KurokawaForm, w: f64, s: f64, tol: f64) -> Result<f64> {
    let a = form.m_list.len() as f64;
    let b = form.n_list.len() as f64;
    let deg = form.degree() as f64;
    if !(tol > 0.0) {
        return Err(precondition("tol must be positive".into()));
    }
    if !(w > 0.0 && w > b - a) {
        return Err(precondition(format!("w = {w} must exceed max(0, b - a) = {}", (b - a).max(0.0))));
    }
    if !(s > deg) {
        return Err(precondition(format!("s = {s} must exceed deg f = {deg}")));
    }
    if form.n_list.contains(&0) || form.m_list.contains(&0) {
        return Err(precondition("factor exponents must be positive".into()));
    }
    let sign = form.sign as f64;
    let half_l = form.l as f64 / 2.0;
    let n_max = form.n_list.iter().copied().max().unwrap_or(1) as f64;
    let t0 = MELLIN_SPLIT.min(1.0 / n_max);
    let gamma_w = gamma(w);
    let eps = tol * gamma_w / 4.0;

    // Series part.
    let alpha = w - 1.0 + a - b;
    const TERMS: usize = 120;
    let mut h = exp_series(half_l - s, TERMS);
    for &m in &form.m_list {
        h = series_mul(&h, &expm1_over_t(m as f64, TERMS));
    }
    for &n in &form.n_list {
        h = series_mul(&h, &series_recip(&expm1_over_t(n as f64, TERMS)));
    }
    let mut head = Accumulator::default();
    for (k, hk) in h.iter().enumerate() {
        let e = alpha + k as f64 + 1.0;
        head.add(hk * t0.powf(e) / e);
    }
    let head = sign * head.value();

    // Tail bound and cutoff.
    let c = s - deg;
    let k_const: f64 = form
        .n_list
        .iter()
        .map(|&n| 1.0 / (1.0 - (-(n as f64) * t0).exp()))
        .product();
    let tail_bound = |t: f64| k_const * gamma_ur(w, c * t) / c.powf(w);
    let mut t_max = 1.0f64.max(2.0 * t0);
    while tail_bound(t_max) >= tol / 4.0 {
        t_max *= 2.0;
        if t_max > 1e6 {
            return Err(precondition("integrand decays too slowly for the requested tol".into()));
        }
    }

    let integrand = |t: f64| {
        let mut log = (half_l - s) * t + (w - 1.0) * t.ln();
        for &m in &form.m_list {
            log += ln_expm1(m as f64 * t);
        }
        for &n in &form.n_list {
            log -= ln_expm1(n as f64 * t);
        }
        sign * log.exp()
    };
    const PANELS: usize = 64;
    let width = (t_max - t0) / PANELS as f64;
    let mut body = Accumulator::default();
    for i in 0..PANELS {
        let lo = t0 + i as f64 * width;
        let hi = lo + width;
        let (fa, fm, fb) = (integrand(lo), integrand(0.5 * (lo + hi)), integrand(hi));
        let whole = simpson(lo, hi, fa, fm, fb);
        body.add(adaptive_simpson(
            &integrand,
            lo,
            hi,
            fa,
            fm,
            fb,
            whole,
            eps / PANELS as f64,
            40,
        ));
    }
    Ok((head + body.value()) / gamma_w)
}

/// `Z_f(w, s)` as the signed sum of multiple Hurwitz zeta values over subsets.
pub fn eval_zf_series(form: &KurokawaForm, w: f64, s: f64, tol: f64) -> Result<f64> {
    let d = absolute_zeta_descriptor(form)?;
    let deg = form.degree() as f64;
    if !(s > deg) {
        return Err(precondition(format!("s = {s} must exceed deg f = {deg}")));
    }
    let total: u64 = d.terms.iter().map(|t| t.multiplicity).sum();
    let each = tol / total as f64;
    let mut acc = Accumulator::default();
    for t in &d.terms {
        let v = eval_multiple_hurwitz(w, s + t.shift as f64, &d.omega, each / t.multiplicity as f64)?;
        acc.add(t.sign as f64 * t.multiplicity as f64 * v);
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn basel() {
        let v = eval_multiple_hurwitz(2.0, 1.0, &[1], 1e-10).unwrap();
        assert!((v - PI * PI / 6.0).abs() < 1e-10);
    }

    #[test]
    fn shifted_zeta_four() {
        let z4 = PI.powi(4) / 90.0;
        let v = eval_multiple_hurwitz(4.0, 2.0, &[1], 1e-10).unwrap();
        assert!((v - (z4 - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn two_dimensional_collapse() {
        // sum (n1 + n2 + 1)^{-5} = sum_k k * k^{-5} = zeta(4)
        let z4 = PI.powi(4) / 90.0;
        let v = eval_multiple_hurwitz(5.0, 1.0, &[1, 1], 1e-6).unwrap();
        assert!((v - z4).abs() < 1e-6);
    }

    #[test]
    fn rejects_divergent_order() {
        assert!(eval_multiple_hurwitz(2.0, 1.0, &[1, 1], 1e-6).is_err());
        assert!(eval_multiple_hurwitz(3.0, 0.0, &[1], 1e-6).is_err());
    }

    #[test]
    fn hurwitz_mellin_classic() {
        // f(x) = 1/(x - 1): Z_f(w, s) = zeta_1(w, s + 1, (1)).
        let form = KurokawaForm {
            sign: 1,
            l: 0,
            m_list: vec![],
            n_list: vec![1],
        };
        let mellin = eval_zf_mellin(&form, 3.0, 2.0, 1e-8).unwrap();
        let direct = eval_multiple_hurwitz(3.0, 3.0, &[1], 1e-10).unwrap();
        assert!((mellin - direct).abs() < 2e-8, "{mellin} vs {direct}");
    }

    #[test]
    fn walk_form_subset_identity() {
        let form = KurokawaForm {
            sign: -1,
            l: 0,
            m_list: vec![1],
            n_list: vec![2, 2, 3, 3],
        };
        let mellin = eval_zf_mellin(&form, 6.0, 1.0, 5e-5).unwrap();
        let series = eval_zf_series(&form, 6.0, 1.0, 5e-5).unwrap();
        assert!((mellin - series).abs() < 1e-4, "{mellin} vs {series}");
    }
}
