//! Truncated power series in the hyperplane class and the Chern classes of
//! complete intersections in projective space.
//!
//! For `X ⊂ P^N` cut out by equations of degrees `d_1..d_k`, the total Chern
//! class of `T_X` is the restriction of `(1+ω)^{N+1} / ∏(1+d_i ω)`, and the
//! top Chern number is `(∏ d_i) · [ω^m]` of that series since `∫_X ω^m = ∏ d_i`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{int, Rational};

/// A power series `Σ c_i ω^i` known modulo `ω^cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
}

impl TruncSeries {
    pub fn zero(cap: usize) -> Self {
        Self { coeffs: vec![Rational::zero(); cap] }
    }

    pub fn one(cap: usize) -> Self {
        let mut s = Self::zero(cap);
        if cap > 0 {
            s.coeffs[0] = Rational::one();
        }
        s
    }

    /// Truncates or zero-pads `coeffs` to `cap`.
    pub fn from_coeffs(cap: usize, coeffs: &[Rational]) -> Self {
        let mut s = Self::zero(cap);
        for (dst, src) in s.coeffs.iter_mut().zip(coeffs) {
            *dst = src.clone();
        }
        s
    }

    /// `a + b·ω`.
    pub fn linear(cap: usize, a: i64, b: i64) -> Self {
        Self::from_coeffs(cap, &[int(a), int(b)])
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `ω^k`; zero past the cap.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cap() != other.cap() {
            return Err(Error::CapMismatch(self.cap(), other.cap()));
        }
        let cap = self.cap();
        let mut out = Self::zero(cap);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..cap - i].iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse modulo `ω^cap`.
    pub fn inv(&self) -> Result<Self> {
        let cap = self.cap();
        let a0 = self.coeff(0);
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let mut out = Self::zero(cap);
        for k in 0..cap {
            let mut acc = if k == 0 { Rational::one() } else { Rational::zero() };
            for j in 1..=k {
                acc -= &self.coeffs[j] * &out.coeffs[k - j];
            }
            out.coeffs[k] = acc / &a0;
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut out = Self::one(self.cap());
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }
}

/// A complete intersection of hypersurfaces of the given degrees in `P^N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CIDescriptor {
    pub ambient_dim: u32,
    pub degrees: Vec<u32>,
}

impl CIDescriptor {
    pub fn new(ambient_dim: u32, degrees: Vec<u32>) -> Result<Self> {
        if degrees.contains(&0) {
            return Err(Error::InvalidIntersection("degrees must be at least 1".into()));
        }
        if degrees.len() as u32 > ambient_dim {
            return Err(Error::InvalidIntersection(format!("{} equations in P^{ambient_dim}", degrees.len())));
        }
        Ok(Self { ambient_dim, degrees })
    }

    /// Intersection of two quadrics in `P^{m+2}`.
    pub fn quadric_pencil(m: u32) -> Self {
        Self { ambient_dim: m + 2, degrees: vec![2, 2] }
    }

    pub fn dim(&self) -> u32 {
        self.ambient_dim - self.degrees.len() as u32
    }

    pub fn degree(&self) -> BigInt {
        self.degrees.iter().map(|&d| BigInt::from(d)).product()
    }
}

pub fn series_mul(a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries> {
    a.mul(b)
}

pub fn series_inv(a: &TruncSeries) -> Result<TruncSeries> {
    a.inv()
}

/// `(1+ω)^{N+1} / ∏(1+d_i ω)` modulo `ω^cap`.
pub fn total_chern(ci: &CIDescriptor, cap: usize) -> Result<TruncSeries> {
    let required = ci.dim() as usize + 1;
    if cap < required {
        return Err(Error::CapTooSmall { cap, required });
    }
    let mut c = TruncSeries::linear(cap, 1, 1).pow(ci.ambient_dim + 1)?;
    for &d in &ci.degrees {
        c = c.mul(&TruncSeries::linear(cap, 1, d as i64).inv()?)?;
    }
    Ok(c)
}

/// Topological Euler characteristic `∫_X c_m(T_X)`.
pub fn euler_char(ci: &CIDescriptor) -> Result<BigInt> {
    let m = ci.dim() as usize;
    let c = total_chern(ci, m + 1)?;
    let top = c.coeff(m) * Rational::from_integer(ci.degree());
    if !top.is_integer() {
        return Err(Error::InvalidIntersection(format!("non-integral Chern number {top}")));
    }
    Ok(top.to_integer())
}

/// Rank of primitive middle cohomology for even-dimensional `X`:
/// `χ(X) − (m+1)`, since every other even degree carries one ambient class.
pub fn primitive_middle_dim(ci: &CIDescriptor) -> Result<u64> {
    let m = ci.dim();
    if m % 2 == 1 {
        return Err(Error::OddDimension(m));
    }
    let chi = euler_char(ci)?;
    let prim = chi - BigInt::from(m + 1);
    prim.to_u64().ok_or_else(|| Error::InvalidIntersection(format!("negative primitive rank for {ci:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    #[test]
    fn mul_examples() {
        let a = TruncSeries::linear(3, 1, 1);
        let b = TruncSeries::linear(3, 1, -1);
        assert_eq!(a.mul(&b).unwrap().coeffs(), &[int(1), int(0), int(-1)]);
        let a = TruncSeries::linear(2, 1, 1);
        assert_eq!(a.mul(&a).unwrap().coeffs(), &[int(1), int(2)]);
        assert_eq!(a.mul(&TruncSeries::one(3)), Err(Error::CapMismatch(2, 3)));
    }

    #[test]
    fn inverse_examples() {
        let s = TruncSeries::linear(5, 1, 2);
        assert_eq!(s.mul(&s.inv().unwrap()).unwrap(), TruncSeries::one(5));

        let geo = TruncSeries::linear(4, 1, 1).inv().unwrap();
        assert_eq!(geo.coeffs(), &[int(1), int(-1), int(1), int(-1)]);

        let half = TruncSeries::from_coeffs(3, &[int(2)]).inv().unwrap();
        assert_eq!(half.coeffs(), &[rat(1, 2), int(0), int(0)]);

        assert_eq!(TruncSeries::linear(3, 0, 1).inv(), Err(Error::NotInvertible));
    }

    #[test]
    fn inverse_of_square_matches_long_division() {
        // Long division of 1 by 1 + 4ω + 4ω²: q_k = -(4 q_{k-1} + 4 q_{k-2}).
        let mut q = vec![1i64, -4];
        for k in 2..5 {
            q.push(-(4 * q[k - 1] + 4 * q[k - 2]));
        }
        assert_eq!(q, vec![1, -4, 12, -32, 80]);
        let sq = TruncSeries::linear(5, 1, 2).pow(2).unwrap();
        let inv = sq.inv().unwrap();
        assert_eq!(inv.coeffs(), q.iter().map(|&x| int(x)).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn hyperplane_is_projective_space() {
        let ci = CIDescriptor::new(5, vec![1]).unwrap();
        let c = total_chern(&ci, 5).unwrap();
        assert_eq!(c, TruncSeries::linear(5, 1, 1).pow(5).unwrap());
    }

    #[test]
    fn cap_too_small() {
        let ci = CIDescriptor::quadric_pencil(4);
        assert_eq!(total_chern(&ci, 4), Err(Error::CapTooSmall { cap: 4, required: 5 }));
    }

    #[test]
    fn pencil_top_coefficient_m4() {
        let c = total_chern(&CIDescriptor::quadric_pencil(4), 5).unwrap();
        assert_eq!(c.coeff(4) * int(4), int(12));
    }

    #[test]
    fn cubic_surface() {
        // χ(cubic surface) = χ(P²) + 6 blown-up points = 3 + 6.
        let ci = CIDescriptor::new(3, vec![3]).unwrap();
        let c = total_chern(&ci, 3).unwrap();
        assert_eq!(c.coeff(2) * int(3), int(9));
        assert_eq!(euler_char(&ci).unwrap(), BigInt::from(9));
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_char(&CIDescriptor::quadric_pencil(4)).unwrap(), BigInt::from(12));
        assert_eq!(euler_char(&CIDescriptor::quadric_pencil(10)).unwrap(), BigInt::from(24));
        // Quadric threefold: Betti numbers 1,0,1,0,1,0,1.
        let q3 = CIDescriptor::new(4, vec![2]).unwrap();
        let betti: i64 = [1, 0, 1, 0, 1, 0, 1].iter().enumerate().map(|(k, b)| if k % 2 == 0 { *b } else { -b }).sum();
        assert_eq!(euler_char(&q3).unwrap(), BigInt::from(betti));
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive_middle_dim(&CIDescriptor::quadric_pencil(4)).unwrap(), 7);
        assert_eq!(primitive_middle_dim(&CIDescriptor::new(5, vec![2]).unwrap()).unwrap(), 1);
        // The base locus Z: two quadrics in P^6, dimension 4 = m - 2 for m = 6.
        assert_eq!(primitive_middle_dim(&CIDescriptor::new(6, vec![2, 2]).unwrap()).unwrap(), 7);
        assert_eq!(primitive_middle_dim(&CIDescriptor::new(6, vec![2, 1, 1]).unwrap()), Err(Error::OddDimension(3)));
    }

    #[test]
    fn descriptor_validation() {
        assert!(CIDescriptor::new(3, vec![0]).is_err());
        assert!(CIDescriptor::new(1, vec![2, 2]).is_err());
        assert_eq!(CIDescriptor::new(6, vec![2, 1, 1]).unwrap().dim(), 3);
    }
}
