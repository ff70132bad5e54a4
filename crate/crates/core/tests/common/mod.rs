//! Oracles shared by the integration tests. They rebuild the objects under test from
//! first principles and share no code path with the library beyond the number types.

#![allow(dead_code)]

use cyclewalk::arith::{Rational, RationalMatrix, RationalPolynomial};
use cyclewalk::walk::{Family, WalkSpec};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

pub fn spec(family: Family, states: u32, vertices: u32) -> WalkSpec {
    WalkSpec::new(family, states, vertices).unwrap()
}

/// Grover coin from the definition: `(2/L) J - I` for M, `(2/L) J - P` for F with `P` the
/// reversal permutation.
pub fn coin(family: Family, states: u32) -> RationalMatrix {
    let l = states as usize;
    let mut a = RationalMatrix::zeros(l, l);
    for i in 0..l {
        for j in 0..l {
            let special = match family {
                Family::M => i == j,
                Family::F => i + j == l - 1,
            };
            a[(i, j)] = q(2, states as i64) - if special { q(1, 1) } else { q(0, 1) };
        }
    }
    a
}

/// `U = S (I_N (x) A)` with the shift as an explicit permutation matrix.
pub fn evolution_by_definition(s: &WalkSpec) -> RationalMatrix {
    let (l, n) = (s.states() as usize, s.vertices() as usize);
    let m = (l - 1) / 2;
    let dim = l * n;
    let a = coin(s.family(), s.states());
    let mut c = RationalMatrix::zeros(dim, dim);
    let mut shift = RationalMatrix::zeros(dim, dim);
    for v in 0..n {
        for i in 0..l {
            for j in 0..l {
                c[(v * l + i, v * l + j)] = a[(i, j)].clone();
            }
            let target = (v + n * l + i - m) % n;
            shift[(target * l + i, v * l + i)] = q(1, 1);
        }
    }
    &shift * &c
}

pub fn mat_pow(m: &RationalMatrix, e: u64) -> RationalMatrix {
    let mut acc = RationalMatrix::identity(m.rows());
    for _ in 0..e {
        acc = &acc * m;
    }
    acc
}

/// `det(xI - M)` by exact rational determinants at `x = 0..n` and Newton interpolation.
pub fn charpoly_by_interpolation(m: &RationalMatrix) -> RationalPolynomial {
    let n = m.rows();
    let xs: Vec<Rational> = (0..=n as i64).map(Rational::from_int).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x| {
            let mut a = RationalMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] = -&m[(i, j)];
                }
                a[(i, i)] += x;
            }
            a.determinant().unwrap()
        })
        .collect();
    newton_interpolate(&xs, &ys)
}

pub fn newton_interpolate(xs: &[Rational], ys: &[Rational]) -> RationalPolynomial {
    let mut dd = ys.to_vec();
    for level in 1..xs.len() {
        for i in (level..xs.len()).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut p = RationalPolynomial::zero();
    for i in (0..xs.len()).rev() {
        let factor = RationalPolynomial::new(vec![-&xs[i], q(1, 1)]);
        p = &(&p * &factor) + &RationalPolynomial::constant(dd[i].clone());
    }
    p
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
