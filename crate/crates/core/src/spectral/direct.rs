//! `det(xI - M)` for a rational matrix by evaluation and interpolation modulo word-sized
//! primes, recombined with the Chinese remainder theorem.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{Rational, RationalMatrix, RationalPolynomial};
use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^61`, descending.
fn primes() -> impl Iterator<Item = u64> {
    let mut next = (1u64 << 61) - 1;
    std::iter::from_fn(move || {
        while !is_prime(next) {
            next -= 2;
        }
        let p = next;
        next -= 2;
        Some(p)
    })
}

fn reduce(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

fn det_mod(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if pivot != col {
            a.swap(pivot, col);
            det = (p - det) % p;
        }
        det = mul_mod(det, a[col][col], p);
        let inv = inv_mod(a[col][col], p);
        for r in col + 1..n {
            if a[r][col] == 0 {
                continue;
            }
            let factor = mul_mod(a[r][col], inv, p);
            for c in col..n {
                let sub = mul_mod(factor, a[col][c], p);
                a[r][c] = (a[r][c] + p - sub) % p;
            }
        }
    }
    det
}

/// Coefficients of `det(yI - B) mod p`, ascending, from values at `y = 0..=n`.
fn charpoly_mod(b: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = b.len();
    let values: Vec<u64> = (0..=n as u64)
        .map(|y| {
            let m = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let diag = if i == j { y % p } else { 0 };
                            (diag + p - b[i][j]) % p
                        })
                        .collect()
                })
                .collect();
            det_mod(m, p)
        })
        .collect();
    // Newton divided differences on the nodes 0, 1, ..., n; node gaps at level j are all j.
    let mut c = values;
    for j in 1..=n {
        let inv_j = inv_mod(j as u64, p);
        for i in (j..=n).rev() {
            c[i] = mul_mod((c[i] + p - c[i - 1]) % p, inv_j, p);
        }
    }
    let mut poly = vec![0u64; n + 1];
    poly[0] = c[n];
    let mut len = 1;
    for i in (0..n).rev() {
        // poly <- poly * (y - i) + c[i]
        let node = i as u64 % p;
        for d in (0..=len).rev() {
            let shifted = if d > 0 { poly[d - 1] } else { 0 };
            let here = if d < len { mul_mod(poly[d], node, p) } else { 0 };
            poly[d] = (shifted + p - here) % p;
        }
        poly[0] = (poly[0] + c[i]) % p;
        len += 1;
    }
    poly
}

/// Characteristic polynomial `det(xI - M)` of a square rational matrix.
///
/// Works with the integer matrix `B = D M` (`D` the common denominator), whose
/// characteristic coefficients are bounded by `(1 + h)^n` with `h` the largest row norm.
/// Residues are gathered until the product of primes exceeds twice that bound.
pub fn direct_charpoly(m: &RationalMatrix) -> Result<RationalPolynomial> {
    if !m.is_square() {
        return Err(Error::Precondition("charpoly of a non-square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(RationalPolynomial::one());
    }
    let (den, b) = m.integer_scaled();
    let max_norm_sq = b
        .iter()
        .map(|row| row.iter().map(|e| e * e).sum::<BigInt>())
        .max()
        .unwrap_or_default();
    let h: BigInt = max_norm_sq.sqrt() + 1u32;
    let bound: BigInt = (h + 1u32).pow(n as u32) * 2u32;

    let mut modulus = BigInt::one();
    let mut residues = vec![BigInt::zero(); n + 1];
    for p in primes() {
        let bp: Vec<Vec<u64>> = b
            .iter()
            .map(|row| row.iter().map(|e| reduce(e, p)).collect())
            .collect();
        let coeffs = charpoly_mod(&bp, p);
        let big_p = BigInt::from(p);
        let m_inv = inv_mod(reduce(&modulus, p), p);
        for (r, &a) in residues.iter_mut().zip(&coeffs) {
            let diff = (a + p - reduce(r, p)) % p;
            let t = mul_mod(diff, m_inv, p);
            *r += &modulus * BigInt::from(t);
        }
        modulus *= &big_p;
        if modulus > bound {
            break;
        }
    }
    let half = &modulus >> 1;
    let coeffs = residues
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let lifted = if r > half { r - &modulus } else { r };
            // g_i = D^{n-i} f_i
            Rational::from(lifted) / Rational::from(den.pow((n - i) as u32))
        })
        .collect();
    let out = RationalPolynomial::new(coeffs);
    debug_assert!(out.is_monic());
    Ok(out)
}
