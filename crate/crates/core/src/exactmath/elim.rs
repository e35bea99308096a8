//! Determinant, rank and null space.
//!
//! Determinants go through fraction-free (Bareiss) elimination on an
//! integer matrix: every row of a rational input is first scaled by the lcm
//! of its denominators, and the scale factors are divided out at the end.
//! Rank and kernels use plain reduced row echelon form over any [`Field`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::{Matrix, QMatrix, ZMatrix};
use super::scalar::{Field, Rational};
use crate::error::Result;

/// Exact determinant of an integer matrix by Bareiss elimination.
pub fn det_int(m: &ZMatrix) -> Result<BigInt> {
    m.require_square()?;
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                // Sylvester's identity guarantees exact division.
                a[(i, j)] = v / &prev;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * a[(n - 1, n - 1)].clone())
}

/// Exact determinant of a rational matrix.
pub fn det(m: &QMatrix) -> Result<Rational> {
    m.require_square()?;
    let n = m.rows();
    let mut scale = BigInt::one();
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        let l = m.row(i).iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        for e in m.row(i) {
            rows.push(e.numer() * (&l / e.denom()));
        }
        scale *= l;
    }
    let z = ZMatrix::from_vec(n, n, rows)?;
    Ok(Rational::new(det_int(&z)?, scale))
}

/// Reduced row echelon form and the pivot columns.
pub fn rref<T: Field>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = T::one() / a[(r, c)].clone();
        for j in c..a.cols() {
            a[(r, j)] = a[(r, j)].clone() * inv.clone();
        }
        for i in 0..a.rows() {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].clone();
                for j in c..a.cols() {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<T: Field>(m: &Matrix<T>) -> usize {
    rref(m).1.len()
}

/// Basis of the right null space, one vector per free column.
pub fn kernel_basis<T: Field>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); m.cols()];
            v[f] = T::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// Solves `m · x = b` if a solution exists (any one of them).
pub fn solve<T: Field>(m: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    assert_eq!(b.len(), m.rows());
    let aug =
        Matrix::from_fn(m.rows(), m.cols() + 1, |i, j| if j < m.cols() { m[(i, j)].clone() } else { b[i].clone() });
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols()) {
        return None;
    }
    let mut x = vec![T::zero(); m.cols()];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r[(row, m.cols())].clone();
    }
    Some(x)
}

/// Whether two families of vectors span the same subspace.
pub fn same_span<T: Field>(len: usize, a: &[Vec<T>], b: &[Vec<T>]) -> Result<bool> {
    let ma = Matrix::from_columns(len, a)?;
    let mb = Matrix::from_columns(len, b)?;
    let both: Vec<Vec<T>> = a.iter().chain(b).cloned().collect();
    let mab = Matrix::from_columns(len, &both)?;
    let (ra, rb, rab) = (rank(&ma), rank(&mb), rank(&mab));
    Ok(ra == rb && rb == rab)
}
