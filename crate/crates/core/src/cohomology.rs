//! Middle cohomology of an even-dimensional intersection of two quadrics.
//!
//! The rational basis is `ω^{m/2}, ζ_0, …, ζ_{m+2}` where the `ζ_i` are the
//! classes of the `m/2`-planes obtained from the base plane by flipping the
//! sign of one coordinate. The integral basis replaces `ω^{m/2}` by
//! `ζ_{-1} = 2ζ − ω^{m/2}` with `ζ = ((m/2+1)ω^{m/2} − Σζ_i)/(m+1)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{
    det, gram_diagonalize, int, integer_kernel_of_row, kernel_basis, rat, solve, sublattice_index, BigInt, QMatrix,
    Rational, Signature, ZMatrix,
};

/// `⟨ζ_i, ζ_j⟩` for `i ≠ j`: `(−1)^{m/2−2}(⌊(m/2−2)/2⌋ + 1)`, floor toward −∞.
pub fn zeta_off_diagonal(m: u32) -> i64 {
    let h = m as i64 / 2;
    let sign = if (h - 2).rem_euclid(2) == 0 { 1 } else { -1 };
    sign * ((h - 2).div_euclid(2) + 1)
}

/// `⟨ζ_i, ζ_i⟩ = (−1)^{m/2}(⌊m/4⌋ + 1)`.
pub fn zeta_self(m: u32) -> i64 {
    let h = m as i64 / 2;
    let sign = if h % 2 == 0 { 1 } else { -1 };
    sign * (m as i64 / 4 + 1)
}

fn check_even(m: u32, min: u32) -> Result<()> {
    if m % 2 == 1 {
        return Err(Error::OddDimension(m));
    }
    if m < min {
        return Err(Error::DimensionOutOfRange { m, reason: format!("need m >= {min}") });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiddleLattice {
    pub m: u32,
    /// `omega^{m/2}`, then `zeta_0..zeta_{m+2}`.
    pub labels: Vec<String>,
    pub gram: QMatrix,
}

impl MiddleLattice {
    /// Gram matrix of `H^m(X, Q)` for even `m >= 4`.
    pub fn new(m: u32) -> Result<Self> {
        check_even(m, 4)?;
        Ok(Self::build(m))
    }

    /// Also admits `m = 2`, where the pairing formula is evaluated with the
    /// floor convention but is not part of the certified range.
    pub fn new_uncertified(m: u32) -> Result<Self> {
        check_even(m, 2)?;
        Ok(Self::build(m))
    }

    fn build(m: u32) -> Self {
        let n = m as usize + 4;
        let (off, diag) = (zeta_off_diagonal(m), zeta_self(m));
        let gram = QMatrix::from_fn(n, n, |i, j| match (i, j) {
            (0, 0) => int(4),
            (0, _) | (_, 0) => int(1),
            _ if i == j => int(diag),
            _ => int(off),
        });
        let mut labels = vec![format!("omega^{}", m / 2)];
        labels.extend((0..=m + 2).map(|i| format!("zeta_{i}")));
        Self { m, labels, gram }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    /// Coordinates of `ζ` in the rational basis.
    pub fn zeta_class(&self) -> Vec<Rational> {
        let m = self.m as i64;
        let mut v = vec![rat(m / 2 + 1, m + 1)];
        v.extend((0..m + 3).map(|_| rat(-1, m + 1)));
        v
    }

    /// Coordinates of `ω^{m/2}`.
    pub fn omega(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.rank()];
        v[0] = Rational::one();
        v
    }

    pub fn integral_basis(&self) -> IntegralBasis {
        let n = self.rank();
        let zeta = self.zeta_class();
        let mut columns = Vec::with_capacity(n);
        // ζ_{-1} = 2ζ − ω
        let mut z_minus = zeta.iter().map(|c| c * int(2)).collect::<Vec<_>>();
        z_minus[0] -= int(1);
        columns.push(z_minus);
        for i in 1..n {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            columns.push(e);
        }
        let change = QMatrix::from_columns(n, &columns).expect("square change of basis");
        IntegralBasis { change }
    }
}

/// Columns express `ζ_{-1}, ζ_0, …, ζ_{m+2}` in the rational basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralBasis {
    pub change: QMatrix,
}

impl IntegralBasis {
    pub fn gram(&self, lattice: &MiddleLattice) -> QMatrix {
        lattice.gram.congruent(&self.change).expect("matching shapes")
    }

    /// Coordinates of a rational class in the integral basis.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        solve(&self.change, v)
    }
}

pub fn quadric_pencil_gram(m: u32) -> Result<MiddleLattice> {
    MiddleLattice::new(m)
}

/// Closed form of the integral Gram determinant: `(−1)^{m+3}` if
/// `m ≡ 2 mod 4`, else `1`.
pub fn expected_integral_gram_det(m: u32) -> Rational {
    if m % 4 == 2 {
        int(if (m + 3).is_multiple_of(2) { 1 } else { -1 })
    } else {
        int(1)
    }
}

/// Determinant of the Gram matrix in `ζ_{-1}, ζ_0, …, ζ_{m+2}`.
pub fn integral_gram_det(m: u32) -> Result<Rational> {
    let lattice = MiddleLattice::new(m)?;
    det(&lattice.integral_basis().gram(&lattice))
}

fn to_integer_vec(v: &[Rational], what: &str) -> Result<Vec<BigInt>> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                Ok(x.to_integer())
            } else {
                Err(Error::ShapeMismatch(format!("{what} is not integral: {x}")))
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveLattice {
    /// Pairings `⟨b_k, ω^{m/2}⟩` of the integral basis vectors.
    pub omega_row: Vec<BigInt>,
    /// `ω^{m/2}` in integral coordinates.
    pub omega_coords: Vec<BigInt>,
    /// Z-basis of the primitive sublattice, integral coordinates.
    pub primitive_basis: Vec<Vec<BigInt>>,
    pub index: BigInt,
}

/// Computes the integral primitive lattice as the integer kernel of pairing
/// with `ω^{m/2}` and returns the index of `Z⟨ω^{m/2}⟩ ⊕ H_prim` in `H^m(X, Z)`.
pub fn primitive_lattice(m: u32) -> Result<PrimitiveLattice> {
    let lattice = MiddleLattice::new(m)?;
    let basis = lattice.integral_basis();
    let g = basis.gram(&lattice);
    let omega_q =
        basis.coordinates(&lattice.omega()).ok_or_else(|| Error::ShapeMismatch("omega outside span".into()))?;
    let omega_coords = to_integer_vec(&omega_q, "omega")?;
    let row_q = g.apply(&omega_q)?;
    let omega_row = to_integer_vec(&row_q, "omega pairing row")?;

    let primitive_basis = integer_kernel_of_row(&omega_row);
    let mut columns = vec![omega_coords.clone()];
    columns.extend(primitive_basis.iter().cloned());
    let inclusion = ZMatrix::from_columns(lattice.rank(), &columns)?;
    let index = sublattice_index(&inclusion)?;
    Ok(PrimitiveLattice { omega_row, omega_coords, primitive_basis, index })
}

pub fn lattice_index(m: u32) -> Result<BigInt> {
    Ok(primitive_lattice(m)?.index)
}

/// Gram matrix of a rational basis of `ω^⊥` and its signature.
pub fn primitive_gram(m: u32) -> Result<(QMatrix, Signature)> {
    let lattice = MiddleLattice::new(m)?;
    primitive_gram_of(&lattice)
}

pub fn primitive_gram_of(lattice: &MiddleLattice) -> Result<(QMatrix, Signature)> {
    let n = lattice.rank();
    let omega_row = QMatrix::from_vec(1, n, lattice.gram.row(0).to_vec())?;
    let k = kernel_basis(&omega_row);
    let kmat = QMatrix::from_columns(n, &k)?;
    let pg = lattice.gram.congruent(&kmat)?;
    let sig = gram_diagonalize(&pg)?.signature();
    Ok((pg, sig))
}

pub fn full_signature(lattice: &MiddleLattice) -> Result<Signature> {
    Ok(gram_diagonalize(&lattice.gram)?.signature())
}
