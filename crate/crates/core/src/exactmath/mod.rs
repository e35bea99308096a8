//! Exact scalars and dense linear algebra over Q, Z and Q(i).

mod congruence;
mod elim;
mod matrix;
mod scalar;
mod smith;

pub use congruence::{gram_diagonalize, Diagonalization, Signature};
pub use elim::{det, det_int, kernel_basis, rank, rref, same_span, solve};
pub use matrix::{GMatrix, Matrix, QMatrix, ZMatrix};
pub use scalar::{fmt_rational, int, parse_rational, rat, Field, GaussRational, Rational};
pub use smith::{integer_kernel_of_row, smith_normal_form, sublattice_index, SmithForm};

pub use num_bigint::BigInt;
