use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::QMatrix;
use super::scalar::Rational;
use crate::error::{Error, Result};

/// Counts of positive, negative and zero diagonal entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn of(diag: &[Rational]) -> Self {
        let positive = diag.iter().filter(|d| d.is_positive()).count();
        let negative = diag.iter().filter(|d| d.is_negative()).count();
        Self { positive, negative, zero: diag.len() - positive - negative }
    }

    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }

    /// Nondegenerate and all of one sign.
    pub fn is_definite(&self) -> bool {
        self.zero == 0 && (self.positive == 0 || self.negative == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonalization {
    pub diag: Vec<Rational>,
    /// Columns are the new basis: `transformᵀ · G · transform = diag`.
    pub transform: QMatrix,
}

impl Diagonalization {
    pub fn signature(&self) -> Signature {
        Signature::of(&self.diag)
    }
}

/// Diagonalizes a symmetric form by simultaneous row/column operations.
///
/// At step `k` the first nonzero diagonal entry at or after `k` is moved into
/// place. If the whole trailing diagonal vanishes, the lowest-index nonzero
/// off-diagonal pair `(i, j)` is used to create one via `e_i ← e_i + e_j`.
pub fn gram_diagonalize(g: &QMatrix) -> Result<Diagonalization> {
    if !g.is_symmetric() {
        return Err(if g.is_square() {
            Error::NotSymmetric
        } else {
            Error::NotSquare { rows: g.rows(), cols: g.cols() }
        });
    }
    let n = g.rows();
    let mut a = g.clone();
    let mut t = QMatrix::identity(n);

    for k in 0..n {
        let pivot = match (k..n).find(|&i| !a[(i, i)].is_zero()) {
            Some(p) => p,
            None => {
                let pair = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[(i, j)].is_zero());
                let Some((i, j)) = pair else { break };
                add_basis_vector(&mut a, &mut t, i, j);
                i
            }
        };
        a.swap_rows(k, pivot);
        a.swap_cols(k, pivot);
        t.swap_cols(k, pivot);

        let p = a[(k, k)].clone();
        for j in k + 1..n {
            if a[(j, k)].is_zero() {
                continue;
            }
            let c = a[(j, k)].clone() / p.clone();
            // e_j ← e_j − c·e_k, applied as a congruence.
            for col in 0..n {
                let v = c.clone() * a[(k, col)].clone();
                a[(j, col)] = a[(j, col)].clone() - v;
            }
            for row in 0..n {
                let v = c.clone() * a[(row, k)].clone();
                a[(row, j)] = a[(row, j)].clone() - v;
            }
            for row in 0..n {
                let v = c.clone() * t[(row, k)].clone();
                t[(row, j)] = t[(row, j)].clone() - v;
            }
        }
    }
    let diag = (0..n).map(|i| a[(i, i)].clone()).collect();
    Ok(Diagonalization { diag, transform: t })
}

// e_i ← e_i + e_j
fn add_basis_vector(a: &mut QMatrix, t: &mut QMatrix, i: usize, j: usize) {
    let n = a.rows();
    for col in 0..n {
        let v = a[(j, col)].clone();
        a[(i, col)] = a[(i, col)].clone() + v;
    }
    for row in 0..n {
        let v = a[(row, j)].clone();
        a[(row, i)] = a[(row, i)].clone() + v;
    }
    for row in 0..n {
        let v = t[(row, j)].clone();
        t[(row, i)] = t[(row, i)].clone() + v;
    }
}
