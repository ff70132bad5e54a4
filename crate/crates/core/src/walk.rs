//! Coin matrices, momentum matrices and the full evolution operator `U = S C` on the cycle `C_N`.
//!
//! Basis order is vertex-major; within a vertex the chirality order is
//! `(<-m, ..., <-1, ., 1->, ..., m->)`, so chirality index `c` moves the walker by `c - m`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{Rational, RationalMatrix};
use crate::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Distinguished entries on the diagonal.
    M,
    /// Distinguished entries on the anti-diagonal.
    F,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::M => "M",
            Family::F => "F",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" => Ok(Family::M),
            "F" | "f" => Ok(Family::F),
            _ => Err(Error::Parse(format!("unknown walk family {s:?}"))),
        }
    }
}

/// A Grover walk: family, odd number of chirality states `L = 2m + 1 >= 3`, cycle length `N >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct WalkSpec {
    family: Family,
    states: u32,
    vertices: u32,
}

#[derive(Deserialize)]
struct RawSpec {
    family: Family,
    states: u32,
    vertices: u32,
}

impl TryFrom<RawSpec> for WalkSpec {
    type Error = Error;
    fn try_from(r: RawSpec) -> Result<Self> {
        WalkSpec::new(r.family, r.states, r.vertices)
    }
}

impl WalkSpec {
    pub fn new(family: Family, states: u32, vertices: u32) -> Result<Self> {
        if states < 3 || states.is_multiple_of(2) {
            return Err(Error::InvalidSpec(format!(
                "states must be odd and >= 3, got {states}"
            )));
        }
        if vertices < 2 {
            return Err(Error::InvalidSpec(format!(
                "vertices must be >= 2, got {vertices}"
            )));
        }
        Ok(WalkSpec {
            family,
            states,
            vertices,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// `L`
    pub fn states(&self) -> u32 {
        self.states
    }

    /// `N`
    pub fn vertices(&self) -> u32 {
        self.vertices
    }

    /// `m = (L - 1) / 2`
    pub fn m(&self) -> u32 {
        (self.states - 1) / 2
    }

    /// `L * N`, the dimension of the evolution operator.
    pub fn dimension(&self) -> usize {
        (self.states * self.vertices) as usize
    }

    /// Signed jump of chirality index `c`.
    pub fn displacement(&self, c: usize) -> i64 {
        c as i64 - self.m() as i64
    }

    /// Every walk of both families with `L * N <= max_dimension`, in `(family, L, N)` order.
    pub fn all_up_to_dimension(max_dimension: usize) -> Vec<WalkSpec> {
        let mut out = Vec::new();
        for family in [Family::M, Family::F] {
            for states in (3..).step_by(2).take_while(|&l| 2 * l as usize <= max_dimension) {
                for vertices in (2..).take_while(|&n| (states * n) as usize <= max_dimension) {
                    out.push(WalkSpec { family, states, vertices });
                }
            }
        }
        out
    }
}

impl fmt::Display for WalkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, L={}, N={})", self.family, self.states, self.vertices)
    }
}

/// Local coin `A`, an `L x L` orthogonal matrix with entries `2/L` or `-(2m-1)/L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoinMatrix(RationalMatrix);

impl CoinMatrix {
    pub fn matrix(&self) -> &RationalMatrix {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    /// Integer matrix `L * A`.
    pub fn scaled_integer(&self) -> Vec<Vec<i64>> {
        let l = Rational::from_int(self.size() as i64);
        (0..self.size())
            .map(|i| {
                self.0
                    .row(i)
                    .iter()
                    .map(|e| (e * &l).to_i64().expect("L*A is integral"))
                    .collect()
            })
            .collect()
    }
}

pub fn coin_matrix(spec: &WalkSpec) -> CoinMatrix {
    let l = spec.states() as usize;
    let big_l = spec.states() as i64;
    let distinguished = Rational::new(-(2 * spec.m() as i64 - 1), big_l).expect("L > 0");
    let other = Rational::new(2, big_l).expect("L > 0");
    let mut a = RationalMatrix::zeros(l, l);
    for i in 0..l {
        for j in 0..l {
            let special = match spec.family() {
                Family::M => i == j,
                Family::F => i + j == l - 1,
            };
            a[(i, j)] = if special {
                distinguished.clone()
            } else {
                other.clone()
            };
        }
    }
    CoinMatrix(a)
}

/// Diagonal of `Z_L^k`: `(zeta_N^{mk}, zeta_N^{(m-1)k}, ..., zeta_N^{-mk})`.
pub fn momentum_matrix(spec: &WalkSpec, k: u32) -> Result<Vec<CyclotomicElement>> {
    if k >= spec.vertices() {
        return Err(Error::OutOfRange {
            what: "sector index k",
            value: k as i64,
        });
    }
    let n = spec.vertices() as u64;
    let m = spec.m() as i64;
    (0..spec.states() as i64)
        .map(|i| CyclotomicElement::root_power(n, (m - i) * k as i64))
        .collect()
}

/// The exact evolution operator `U = S C` of a walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvolutionMatrix {
    spec: WalkSpec,
    entries: RationalMatrix,
}

impl EvolutionMatrix {
    pub fn spec(&self) -> &WalkSpec {
        &self.spec
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.entries
    }

    pub fn dimension(&self) -> usize {
        self.entries.rows()
    }

    /// Basis index of `|v> (x) |c>`.
    pub fn index(&self, vertex: usize, chirality: usize) -> usize {
        vertex * self.spec.states() as usize + chirality
    }

    /// The `L x L` block coupling vertex `v` (rows) to vertex `w` (columns).
    pub fn block(&self, v: usize, w: usize) -> RationalMatrix {
        let l = self.spec.states() as usize;
        let mut b = RationalMatrix::zeros(l, l);
        for i in 0..l {
            for j in 0..l {
                b[(i, j)] = self.entries[(v * l + i, w * l + j)].clone();
            }
        }
        b
    }

    /// Sparse rows of the integer matrix `L * U`: `(column, value)` pairs per row.
    pub fn scaled_sparse_rows(&self) -> Vec<Vec<(usize, BigInt)>> {
        let l = Rational::from_int(self.spec.states() as i64);
        (0..self.dimension())
            .map(|i| {
                self.entries
                    .row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| !e.is_zero())
                    .map(|(j, e)| {
                        let s = e * &l;
                        debug_assert!(s.is_integer());
                        (j, s.numer().clone())
                    })
                    .collect()
            })
            .collect()
    }
}

/// Builds `U = S C` with `C = I_N (x) A` and `S: (v, c) -> (v + c - m mod N, c)`.
///
/// When `N <= 2m` several chiralities can land on the same target vertex; their
/// contributions to a block add up.
pub fn evolution_matrix(spec: &WalkSpec) -> EvolutionMatrix {
    let coin = coin_matrix(spec);
    let l = spec.states() as usize;
    let n = spec.vertices() as i64;
    let dim = spec.dimension();
    let mut u = RationalMatrix::zeros(dim, dim);
    for v in 0..n {
        for c in 0..l {
            let target = (v + spec.displacement(c)).rem_euclid(n) as usize;
            let row = target * l + c;
            for c2 in 0..l {
                u[(row, v as usize * l + c2)] += &coin.matrix()[(c, c2)];
            }
        }
    }
    EvolutionMatrix {
        spec: *spec,
        entries: u,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn spec(f: Family, l: u32, n: u32) -> WalkSpec {
        WalkSpec::new(f, l, n).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(WalkSpec::new(Family::M, 4, 5).is_err());
        assert!(WalkSpec::new(Family::M, 1, 5).is_err());
        assert!(WalkSpec::new(Family::F, 3, 1).is_err());
        let s = spec(Family::F, 7, 2);
        assert_eq!(s.m(), 3);
        assert_eq!(s.dimension(), 14);
        assert!(serde_json::from_str::<WalkSpec>(r#"{"family":"M","states":6,"vertices":3}"#).is_err());
    }

    #[test]
    fn coin_m3() {
        let a = coin_matrix(&spec(Family::M, 3, 2));
        let want = [[-1, 2, 2], [2, -1, 2], [2, 2, -1]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.matrix()[(i, j)], q(want[i][j], 3));
            }
        }
    }

    #[test]
    fn coin_f3() {
        let a = coin_matrix(&spec(Family::F, 3, 2));
        let want = [[2, 2, -1], [2, -1, 2], [-1, 2, 2]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.matrix()[(i, j)], q(want[i][j], 3));
            }
        }
    }

    #[test]
    fn coin_row_sums_are_one_and_orthogonal() {
        for fam in [Family::M, Family::F] {
            for l in [3, 5, 7, 9, 11] {
                let a = coin_matrix(&spec(fam, l, 2));
                for i in 0..l as usize {
                    let s: Rational = a.matrix().row(i).iter().cloned().sum();
                    assert!(s.is_one());
                }
                let t = a.matrix().transpose();
                assert!((&t * a.matrix()).is_identity());
                assert_eq!(t, *a.matrix());
            }
        }
    }

    #[test]
    fn momentum_diagonal() {
        let s = spec(Family::M, 3, 5);
        let z = momentum_matrix(&s, 1).unwrap();
        assert_eq!(z[0], CyclotomicElement::root_power(5, 1).unwrap());
        assert!(z[1].is_one());
        assert_eq!(z[2], CyclotomicElement::root_power(5, 4).unwrap());
        assert!(momentum_matrix(&s, 0).unwrap().iter().all(CyclotomicElement::is_one));
        assert!(momentum_matrix(&s, 5).is_err());
    }

    #[test]
    fn momentum_determinant_is_one() {
        let s = spec(Family::F, 7, 9);
        for k in 0..9 {
            let d = momentum_matrix(&s, k)
                .unwrap()
                .iter()
                .fold(CyclotomicElement::one(9), |acc, z| &acc * z);
            assert!(d.is_one());
        }
    }

    /// Row selection `e_c e_c^T A`.
    fn selection(a: &CoinMatrix, rows: &[usize]) -> RationalMatrix {
        let l = a.size();
        let mut out = RationalMatrix::zeros(l, l);
        for &c in rows {
            for j in 0..l {
                out[(c, j)] += &a.matrix()[(c, j)];
            }
        }
        out
    }

    #[test]
    fn printed_block_layout_m3_n5() {
        let s = spec(Family::M, 3, 5);
        let u = evolution_matrix(&s);
        let a = coin_matrix(&s);
        let (left, stay, right) = (selection(&a, &[0]), selection(&a, &[1]), selection(&a, &[2]));
        let zero = RationalMatrix::zeros(3, 3);
        let first_row = [&stay, &left, &zero, &zero, &right];
        for (w, want) in first_row.iter().enumerate() {
            assert_eq!(&u.block(0, w), *want, "block (0, {w})");
        }
        // second block row (R, S, L, O, O)
        assert_eq!(u.block(1, 0), right);
        assert_eq!(u.block(1, 1), stay);
        assert_eq!(u.block(1, 2), left);
    }

    #[test]
    fn printed_block_layout_m5_n4() {
        let s = spec(Family::M, 5, 4);
        let u = evolution_matrix(&s);
        let a = coin_matrix(&s);
        let stay = selection(&a, &[2]);
        let l1 = selection(&a, &[1]);
        let r1 = selection(&a, &[3]);
        let l2_r2 = selection(&a, &[0, 4]);
        assert_eq!(u.block(0, 0), stay);
        assert_eq!(u.block(0, 1), l1);
        assert_eq!(u.block(0, 2), l2_r2);
        assert_eq!(u.block(0, 3), r1);
    }

    #[test]
    fn orthogonal_f3_n4() {
        let u = evolution_matrix(&spec(Family::F, 3, 4));
        assert!((&u.matrix().transpose() * u.matrix()).is_identity());
    }

    #[test]
    fn two_vertex_wrap() {
        // j and -j coincide mod 2; every row still carries L nonzeros.
        let u = evolution_matrix(&spec(Family::M, 5, 2));
        for i in 0..u.dimension() {
            assert_eq!(u.matrix().nonzeros_in_row(i), 5);
            assert_eq!(u.matrix().nonzeros_in_col(i), 5);
        }
        assert!((&u.matrix().transpose() * u.matrix()).is_identity());
    }
}
