use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt;

use crate::arith::{gcd_all, to_i128};
use crate::Error;

/// A ternary quadratic form Q(x) = Σ g_ij x_i x_j given by its symmetric integer
/// Gram matrix. Degenerate forms can be represented (a singular fibre is still a
/// fibre), but every arithmetic operation on conics requires det ≠ 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryForm {
    gram: [[BigInt; 3]; 3],
}

impl TernaryForm {
    pub fn new(gram: [[BigInt; 3]; 3]) -> Result<Self, Error> {
        for i in 0..3 {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidInput(format!(
                        "Gram matrix is not symmetric at ({j}, {i})"
                    )));
                }
            }
        }
        Ok(TernaryForm { gram })
    }

    pub fn from_i64(g: [[i64; 3]; 3]) -> Result<Self, Error> {
        Self::new(g.map(|row| row.map(BigInt::from)))
    }

    pub fn diagonal(a: i64, b: i64, c: i64) -> Self {
        Self::from_i64([[a, 0, 0], [0, b, 0], [0, 0, c]]).unwrap()
    }

    pub fn gram(&self) -> &[[BigInt; 3]; 3] {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.gram[i][j]
    }

    pub fn det(&self) -> BigInt {
        let g = &self.gram;
        &g[0][0] * (&g[1][1] * &g[2][2] - &g[1][2] * &g[2][1]) - &g[0][1] * (&g[1][0] * &g[2][2] - &g[1][2] * &g[2][0])
            + &g[0][2] * (&g[1][0] * &g[2][1] - &g[1][1] * &g[2][0])
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det().is_zero()
    }

    pub(crate) fn require_nondegenerate(&self) -> Result<(), Error> {
        if self.is_nondegenerate() {
            Ok(())
        } else {
            Err(Error::Precondition(format!("the form {self} is singular")))
        }
    }

    /// The 2×2 minor with row `i` and column `j` deleted.
    pub fn minor(&self, i: usize, j: usize) -> BigInt {
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        let g = &self.gram;
        &g[rows[0]][cols[0]] * &g[rows[1]][cols[1]] - &g[rows[0]][cols[1]] * &g[rows[1]][cols[0]]
    }

    /// Adjugate matrix; adj·G = det·I.
    pub fn adjugate(&self) -> [[BigInt; 3]; 3] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let m = self.minor(j, i);
                if (i + j) % 2 == 0 {
                    m
                } else {
                    -m
                }
            })
        })
    }

    /// gcd of the nine 2×2 minors, 0 when all of them vanish.
    pub fn minors_gcd(&self) -> BigInt {
        let minors: Vec<BigInt> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| self.minor(i, j))
            .collect();
        gcd_all(minors.iter())
    }

    pub fn eval(&self, x: &[BigInt; 3]) -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc += &self.gram[i][j] * &x[i] * &x[j];
            }
        }
        acc
    }

    /// Gram entries as i128 when every entry fits.
    pub fn to_i128(&self) -> Option<[[i128; 3]; 3]> {
        let mut out = [[0i128; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = to_i128(&self.gram[i][j])?;
            }
        }
        Some(out)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| i == j || self.gram[i][j].is_zero()))
    }

    /// The form x ↦ Q(Mx) for an integer matrix M, i.e. Gram MᵀGM.
    pub fn transform(&self, m: &[[BigInt; 3]; 3]) -> TernaryForm {
        let gm: [[BigInt; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &self.gram[i][k] * &m[k][j]).sum()));
        let out = std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &m[k][i] * &gm[k][j]).sum()));
        TernaryForm { gram: out }
    }

    pub fn scaled(&self, c: &BigInt) -> TernaryForm {
        TernaryForm {
            gram: self.gram.clone().map(|row| row.map(|v| v * c)),
        }
    }

    /// Number of nonzero eigenvalue signs: true when Q is positive or negative definite.
    pub fn is_definite(&self) -> bool {
        let g = &self.gram;
        let d1 = g[0][0].clone();
        let d2 = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
        let d3 = self.det();
        let pos = d1.is_positive() && d2.is_positive() && d3.is_positive();
        let neg = d1.is_negative() && d2.is_positive() && d3.is_negative();
        pos || neg
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .gram
            .iter()
            .map(|r| format!("{} {} {}", r[0], r[1], r[2]))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}
