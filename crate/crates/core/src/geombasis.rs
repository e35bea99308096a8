//! Exact checks that Reid's points lie on both quadrics and that the plane
//! they span lies in `X = {Σ x_i² = Σ λ_i x_i² = 0}`.
//!
//! A point with coordinates `a_i / √(∏_{j≠i}(λ_i − λ_j))` enters `f_1`, `f_2`
//! only through `a_i² c_i`, so every identity is checked on the squared form
//! with the Lagrange weights `c_i = 1/∏_{j≠i}(λ_i − λ_j)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{fmt_rational, int, Rational};

/// Pairwise distinct interpolation nodes `λ_0, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaConfig {
    lambdas: Vec<Rational>,
}

impl LambdaConfig {
    /// Any non-empty list of distinct nodes.
    pub fn nodes(lambdas: Vec<Rational>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::LambdaCount { got: 0, expected: 1 });
        }
        for (i, a) in lambdas.iter().enumerate() {
            if lambdas[..i].contains(a) {
                return Err(Error::RepeatedLambda(fmt_rational(a)));
            }
        }
        Ok(Self { lambdas })
    }

    /// The `m+3` nodes of the pencil `Σ λ_i x_i²` in `P^{m+2}`.
    pub fn for_m(m: u32, lambdas: Vec<Rational>) -> Result<Self> {
        let expected = m as usize + 3;
        if lambdas.len() != expected {
            return Err(Error::LambdaCount { got: lambdas.len(), expected });
        }
        Self::nodes(lambdas)
    }

    /// `λ = (0, 1, …, m+2)`.
    pub fn default_for(m: u32) -> Self {
        Self { lambdas: (0..m as i64 + 3).map(int).collect() }
    }

    pub fn lambdas(&self) -> &[Rational] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// `m = #nodes − 3`, if non-negative.
    pub fn m(&self) -> Option<u32> {
        self.len().checked_sub(3).map(|m| m as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangeWeights {
    pub c: Vec<Rational>,
}

pub fn lagrange_weights(cfg: &LambdaConfig) -> LagrangeWeights {
    let l = cfg.lambdas();
    let c = l
        .iter()
        .enumerate()
        .map(|(i, li)| {
            let prod =
                l.iter().enumerate().filter(|&(j, _)| j != i).fold(Rational::one(), |acc, (_, lj)| acc * (li - lj));
            prod.recip()
        })
        .collect();
    LagrangeWeights { c }
}

/// `Σ_i λ_i^p c_i`.
pub fn power_sum(cfg: &LambdaConfig, p: u32) -> Rational {
    let w = lagrange_weights(cfg);
    weighted_sum(cfg, &w, |x| num_traits::pow(x.clone(), p as usize))
}

fn weighted_sum(cfg: &LambdaConfig, w: &LagrangeWeights, f: impl Fn(&Rational) -> Rational) -> Rational {
    cfg.lambdas().iter().zip(&w.c).fold(Rational::zero(), |acc, (x, c)| acc + f(x) * c)
}

/// `f_1(P_k) = f_2(P_k) = 0` for `k = 0..=m/2`.
pub fn verify_points_on_quadrics(cfg: &LambdaConfig) -> Result<bool> {
    let m = even_m(cfg)?;
    Ok((0..=m / 2).all(|k| power_sum(cfg, 2 * k).is_zero() && power_sum(cfg, 2 * k + 1).is_zero()))
}

fn even_m(cfg: &LambdaConfig) -> Result<u32> {
    let m = cfg.m().ok_or(Error::LambdaCount { got: cfg.len(), expected: 3 })?;
    if m % 2 == 1 {
        return Err(Error::OddDimension(m));
    }
    Ok(m)
}

fn eval_poly(q: &[Rational], x: &Rational) -> Rational {
    q.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a)
}

/// `(Σ c_i Q(λ_i)², Σ c_i λ_i Q(λ_i)²)`: the values of `f_1`, `f_2` at the plane
/// point whose weights are `Q(λ_i)`.
pub fn plane_point_values(cfg: &LambdaConfig, q: &[Rational]) -> (Rational, Rational) {
    let w = lagrange_weights(cfg);
    let f1 = weighted_sum(cfg, &w, |x| {
        let v = eval_poly(q, x);
        &v * &v
    });
    let f2 = weighted_sum(cfg, &w, |x| {
        let v = eval_poly(q, x);
        x * &v * &v
    });
    (f1, f2)
}

/// Random polynomial of degree `<= deg` with small rational coefficients.
pub fn random_poly(rng: &mut impl Rng, deg: u32) -> Vec<Rational> {
    (0..=deg)
        .map(|_| {
            let num: i64 = rng.gen_range(-50..=50);
            let den: i64 = rng.gen_range(1..=20);
            Rational::new(BigInt::from(num), BigInt::from(den))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneCheck {
    pub trials: u32,
    pub seed: u64,
    pub failures: u32,
}

impl PlaneCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Checks `trials` random `Q` of degree `<= m/2`, plus the boundary cases
/// `Q = 1` and `Q = x^{m/2}`.
pub fn plane_check(cfg: &LambdaConfig, trials: u32, seed: u64) -> Result<PlaneCheck> {
    let m = even_m(cfg)?;
    let deg = m / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut monomial = vec![Rational::zero(); deg as usize + 1];
    monomial[deg as usize] = Rational::one();
    let mut polys = vec![vec![Rational::one()], monomial];
    polys.extend((0..trials).map(|_| random_poly(&mut rng, deg)));
    let failures = polys
        .iter()
        .filter(|q| {
            let (a, b) = plane_point_values(cfg, q);
            !(a.is_zero() && b.is_zero())
        })
        .count() as u32;
    Ok(PlaneCheck { trials, seed, failures })
}

#[allow(non_snake_case)]
pub fn verify_plane_in_X(cfg: &LambdaConfig, trials: u32, seed: u64) -> Result<bool> {
    Ok(plane_check(cfg, trials, seed)?.passed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn ints(v: &[i64]) -> LambdaConfig {
        LambdaConfig::nodes(v.iter().map(|&x| int(x)).collect()).unwrap()
    }

    /// Leading coefficient of the interpolant of `x^p`, as a Newton divided
    /// difference.
    fn divided_difference(nodes: &[Rational], p: u32) -> Rational {
        let mut table: Vec<Rational> = nodes.iter().map(|x| num_traits::pow(x.clone(), p as usize)).collect();
        for level in 1..nodes.len() {
            for i in (level..nodes.len()).rev() {
                table[i] = (&table[i] - &table[i - 1]) / (&nodes[i] - &nodes[i - level]);
            }
        }
        table[nodes.len() - 1].clone()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(lagrange_weights(&ints(&[0, 1])).c, vec![int(-1), int(1)]);
        assert_eq!(lagrange_weights(&ints(&[0, 1, 2])).c, vec![rat(1, 2), int(-1), rat(1, 2)]);
        let w = lagrange_weights(&LambdaConfig::default_for(4));
        assert_eq!(w.c.len(), 7);
        assert!(w.c.iter().all(|c| !c.is_zero()));
        assert!(w.c.iter().fold(Rational::zero(), |a, c| a + c).is_zero());
    }

    #[test]
    fn repeated_lambda_rejected() {
        let r = LambdaConfig::nodes(vec![int(1), int(2), int(1)]);
        assert_eq!(r, Err(Error::RepeatedLambda("1".into())));
        assert!(LambdaConfig::for_m(4, vec![int(0); 3]).is_err());
    }

    #[test]
    fn power_sums_match_divided_differences() {
        let cfg = LambdaConfig::default_for(4);
        assert!(power_sum(&ints(&[0, 1]), 0).is_zero());
        assert!(power_sum(&cfg, 5).is_zero());
        assert_eq!(power_sum(&cfg, 6), int(1));
        let cfg = LambdaConfig::nodes(vec![rat(-3, 2), int(0), rat(1, 3), int(5), rat(7, 4)]).unwrap();
        for p in 0..10 {
            assert_eq!(power_sum(&cfg, p), divided_difference(cfg.lambdas(), p), "p = {p}");
        }
    }

    #[test]
    fn points_on_quadrics() {
        assert!(verify_points_on_quadrics(&LambdaConfig::default_for(4)).unwrap());
        assert!(verify_points_on_quadrics(&ints(&[1, 2, 3, 4, 5, 6, 7, 8, 9])).unwrap());
        assert!(verify_points_on_quadrics(&ints(&[0, 1, 2])).unwrap());
        assert_eq!(verify_points_on_quadrics(&ints(&[0, 1, 2, 3])), Err(Error::OddDimension(1)));
    }

    #[test]
    fn plane_boundary_cases() {
        let cfg = LambdaConfig::default_for(4);
        let (a, b) = plane_point_values(&cfg, &[int(1)]);
        assert_eq!((a, b), (power_sum(&cfg, 0), power_sum(&cfg, 1)));
        let (a, b) = plane_point_values(&cfg, &[int(0), int(0), int(1)]);
        assert_eq!((a, b), (power_sum(&cfg, 4), power_sum(&cfg, 5)));
        // One degree too many reaches p = m+2 and fails.
        let (a, _) = plane_point_values(&cfg, &[int(0), int(0), int(0), int(1)]);
        assert_eq!(a, int(1));
    }

    #[test]
    fn plane_in_x() {
        assert!(verify_plane_in_X(&LambdaConfig::default_for(4), 100, 42).unwrap());
        let c = plane_check(&LambdaConfig::default_for(6), 10, 7).unwrap();
        assert_eq!(c, PlaneCheck { trials: 10, seed: 7, failures: 0 });
    }
}
