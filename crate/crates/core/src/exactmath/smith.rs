use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::ZMatrix;
use crate::error::{Error, Result};

/// `left · M · right = diag(diagonal)` with unimodular `left`, `right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Invariant factors, non-negative, each dividing the next.
    /// Trailing zeros appear when the input is rank deficient.
    pub diagonal: Vec<BigInt>,
    pub left: ZMatrix,
    pub right: ZMatrix,
}

fn add_row_multiple(a: &mut ZMatrix, dst: usize, src: usize, q: &BigInt) {
    for j in 0..a.cols() {
        let v = &a[(src, j)] * q;
        a[(dst, j)] += v;
    }
}

fn add_col_multiple(a: &mut ZMatrix, dst: usize, src: usize, q: &BigInt) {
    for i in 0..a.rows() {
        let v = &a[(i, src)] * q;
        a[(i, dst)] += v;
    }
}

pub fn smith_normal_form(m: &ZMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = ZMatrix::identity(rows);
    let mut right = ZMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // Smallest nonzero entry of the trailing block; lowest index on ties.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, left, right);
            };
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let pivot = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &pivot);
                add_row_multiple(&mut a, i, t, &q);
                add_row_multiple(&mut left, i, t, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &pivot);
                add_col_multiple(&mut a, j, t, &q);
                add_col_multiple(&mut right, j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and redo.
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[(i, j)] % &pivot).is_zero()));
            match offending {
                Some(i) => {
                    add_row_multiple(&mut a, t, i, &BigInt::one());
                    add_row_multiple(&mut left, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            let neg = -BigInt::one();
            for j in 0..cols {
                a[(t, j)] = &a[(t, j)] * &neg;
            }
            for j in 0..rows {
                left[(t, j)] = &left[(t, j)] * &neg;
            }
        }
    }
    finish(a, left, right)
}

fn finish(a: ZMatrix, left: ZMatrix, right: ZMatrix) -> SmithForm {
    let diagonal = (0..a.rows().min(a.cols())).map(|i| a[(i, i)].abs()).collect();
    SmithForm { diagonal, left, right }
}

/// Index of the sublattice spanned by the columns of `m` (given in
/// coordinates of a basis of the ambient lattice). Requires full rank.
pub fn sublattice_index(m: &ZMatrix) -> Result<BigInt> {
    m.require_square()?;
    let snf = smith_normal_form(m);
    if snf.diagonal.iter().any(Zero::is_zero) {
        return Err(Error::ShapeMismatch("sublattice is not of full rank".into()));
    }
    Ok(snf.diagonal.iter().product())
}

/// Z-basis of `{x ∈ Zⁿ : row · x = 0}` for a single integer row.
pub fn integer_kernel_of_row(row: &[BigInt]) -> Vec<Vec<BigInt>> {
    let m = ZMatrix::from_vec(1, row.len(), row.to_vec()).expect("row shape");
    let snf = smith_normal_form(&m);
    let r = snf.diagonal.iter().filter(|d| !d.is_zero()).count();
    (r..row.len()).map(|j| snf.right.column(j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::elim::det_int;

    fn check(m: &ZMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        let d = s.left.matmul(m).unwrap().matmul(&s.right).unwrap();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j { s.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(d[(i, j)], expect, "entry ({i},{j}) of {d:?}");
            }
        }
        assert_eq!(det_int(&s.left).unwrap().abs(), BigInt::one());
        assert_eq!(det_int(&s.right).unwrap().abs(), BigInt::one());
        for w in s.diagonal.windows(2) {
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero());
            } else {
                assert!(w[1].is_zero());
            }
        }
        s
    }

    #[test]
    fn identity_and_diag() {
        let s = check(&ZMatrix::identity(3));
        assert_eq!(s.diagonal, vec![BigInt::from(1); 3]);
        let s = check(&ZMatrix::from_i64(2, 2, &[2, 0, 0, 4]).unwrap());
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn non_divisible_diagonal_is_fixed() {
        let s = check(&ZMatrix::from_i64(2, 2, &[2, 0, 0, 3]).unwrap());
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let s = check(&ZMatrix::from_i64(2, 3, &[2, 4, 4, -6, 6, 12]).unwrap());
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(6)]);
        let s = check(&ZMatrix::from_i64(2, 2, &[1, 2, 2, 4]).unwrap());
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn index_of_full_lattice_is_one() {
        assert_eq!(sublattice_index(&ZMatrix::identity(4)).unwrap(), BigInt::one());
        let m = ZMatrix::from_i64(2, 2, &[1, 1, 1, 2]).unwrap();
        assert_eq!(sublattice_index(&m).unwrap(), BigInt::one());
        assert!(sublattice_index(&ZMatrix::from_i64(2, 2, &[1, 2, 2, 4]).unwrap()).is_err());
    }

    #[test]
    fn row_kernel() {
        let row: Vec<BigInt> = [-2, 1, 1].iter().map(|&x| BigInt::from(x)).collect();
        let k = integer_kernel_of_row(&row);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: BigInt = row.iter().zip(v).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }
}
