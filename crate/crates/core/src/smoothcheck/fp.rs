//! Arithmetic in the prime field `F_p` on plain `u64` residues.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::Rational;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The field `F_p` for an odd prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 || p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn reduce_big(self, x: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = x % &p;
        if r.is_negative() {
            r += &p;
        }
        r.to_u64().expect("residue fits")
    }

    /// `num/den mod p`, or `None` when `p` divides the denominator.
    pub fn from_rational(self, x: &Rational) -> Option<u64> {
        let den = self.reduce_big(x.denom());
        if den.is_zero() {
            return None;
        }
        Some(self.mul(self.reduce_big(x.numer()), self.inv(den)?))
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> Option<u64> {
        (!a.is_multiple_of(self.p)).then(|| self.pow(a, self.p - 2))
    }

    /// `|P^{n-1}(F_p)| = (p^n − 1)/(p − 1)` for `n` homogeneous coordinates.
    pub fn projective_count(self, n: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        let p = self.p as u128;
        (p.pow(n as u32) - 1) / (p - 1)
    }
}

/// Rank of a dense matrix over `F_p`.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, f: Fp) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = f.inv(rows[rank][col]).expect("nonzero pivot");
        for r in 0..rows.len() {
            if r == rank || rows[r][col] == 0 {
                continue;
            }
            let c = f.mul(rows[r][col], inv);
            let (target, pivot) = if r < rank {
                let (a, b) = rows.split_at_mut(rank);
                (&mut a[r], &b[0])
            } else {
                let (a, b) = rows.split_at_mut(r);
                (&mut b[0], &a[rank])
            };
            for (x, &y) in target[col..ncols].iter_mut().zip(&pivot[col..ncols]) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    #[test]
    fn primes() {
        assert!(Fp::new(5).is_ok());
        assert_eq!(Fp::new(2), Err(Error::NotOddPrime(2)));
        assert_eq!(Fp::new(9), Err(Error::NotOddPrime(9)));
        assert!(is_prime(11) && !is_prime(1) && !is_prime(91));
    }

    #[test]
    fn field_ops() {
        let f = Fp::new(7).unwrap();
        assert_eq!(f.reduce(-1), 6);
        assert_eq!(f.inv(3), Some(5));
        assert_eq!(f.inv(0), None);
        assert_eq!(f.from_rational(&rat(1, 2)), Some(4));
        assert_eq!(f.from_rational(&rat(-3, 4)), Some(f.mul(4, f.inv(4).unwrap())));
        assert_eq!(f.from_rational(&rat(1, 7)), None);
        assert_eq!(f.projective_count(2), 8);
        assert_eq!(f.projective_count(3), 57);
    }

    #[test]
    fn ranks() {
        let f = Fp::new(5).unwrap();
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 4]], f), 1);
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 1]], f), 2);
        // det = −5: invertible over Q, singular over F_5.
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![3, 1], vec![0, 0]], f), 1);
        assert_eq!(rank_mod_p(vec![vec![0, 0, 3]], f), 1);
    }
}
