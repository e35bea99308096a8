//! Equations of the degeneration `X̂ = {f_1 = t f_2 + g_1 g_2 = 0}` and of the
//! two affine charts of its blow-up along `X_2 = {t = f_1 = g_2 = 0}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fp::Fp;
use super::poly::Poly;
use super::scan::{enumerate_points, Jacobian, PolySystem};
use crate::error::{Error, Result};
use crate::exactmath::{fmt_rational, Rational};

/// Data of the family reduced modulo `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub m: u32,
    pub p: u64,
    pub lambda: Vec<u64>,
    pub g1: Vec<u64>,
    pub g2: Vec<u64>,
}

/// Reduces `λ` modulo `p` and lists the colliding index pairs.
pub fn reduce_lambda(lambda: &[Rational], f: Fp) -> Result<(Vec<u64>, Vec<[usize; 2]>)> {
    let mut residues = Vec::with_capacity(lambda.len());
    for (i, l) in lambda.iter().enumerate() {
        let r = f.from_rational(l).ok_or_else(|| Error::LambdaCollision {
            p: f.p(),
            detail: format!("denominator of lambda_{i} = {} vanishes", fmt_rational(l)),
        })?;
        residues.push(r);
    }
    let mut collisions = Vec::new();
    for i in 0..residues.len() {
        for j in i + 1..residues.len() {
            if residues[i] == residues[j] {
                collisions.push([i, j]);
            }
        }
    }
    Ok((residues, collisions))
}

fn dot(a: &[u64], b: &[u64], f: Fp) -> u64 {
    a.iter().zip(b).fold(0, |acc, (x, y)| f.add(acc, f.mul(*x, *y)))
}

/// Algebraic genericity conditions on `g_1 = a·t`, `g_2 = b·t` for
/// `f_1 = Σ t_i²`: smooth hyperplane sections need `a·a ≠ 0`, `b·b ≠ 0`, and
/// `D` is smooth iff the Gram matrix of `(a, b)` is invertible.
pub fn forms_are_generic(a: &[u64], b: &[u64], f: Fp) -> bool {
    let (aa, bb, ab) = (dot(a, a, f), dot(b, b, f), dot(a, b, f));
    aa != 0 && bb != 0 && f.sub(f.mul(aa, bb), f.mul(ab, ab)) != 0
}

pub const MAX_DRAWS: usize = 64;

/// Draws `g_1`, `g_2`: the first attempt uses `g_1 = t_0 + 2t_1 + 3t_2 + …`
/// and a seeded random `g_2`; later attempts redraw both. A draw is accepted
/// when the algebraic conditions hold and the scanned `Z` is smooth.
pub fn draw_linear_forms(m: u32, f: Fp, lambda: &[u64], seed: u64, budget: u128) -> Result<(FamilyParams, usize)> {
    let n = m as usize + 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ f.p().rotate_left(32));
    let random_form = |rng: &mut ChaCha8Rng| -> Vec<u64> { (0..n).map(|_| rng.gen_range(0..f.p())).collect() };
    for attempt in 0..MAX_DRAWS {
        let g1 = if attempt == 0 { (1..=n as i64).map(|c| f.reduce(c)).collect() } else { random_form(&mut rng) };
        let g2 = random_form(&mut rng);
        if !forms_are_generic(&g1, &g2, f) {
            continue;
        }
        let params = FamilyParams { m, p: f.p(), lambda: lambda.to_vec(), g1, g2 };
        let family = Family::new(params.clone())?;
        let z = family.z();
        let jac = Jacobian::new(&z);
        let points = enumerate_points(&z, f, budget)?;
        let mut smooth = true;
        for x in &points {
            if jac.rank_at(x, f)? < 4 {
                smooth = false;
                break;
            }
        }
        if smooth {
            return Ok((params, attempt + 1));
        }
    }
    Err(Error::NoGenericForms { p: f.p(), attempts: MAX_DRAWS })
}

/// The systems attached to one choice of `(λ, g_1, g_2)` modulo `p`.
#[derive(Clone, Debug)]
pub struct Family {
    pub params: FamilyParams,
    f: Fp,
}

impl Family {
    pub fn new(params: FamilyParams) -> Result<Self> {
        let f = Fp::new(params.p)?;
        let n = params.m as usize + 3;
        for (name, v) in [("lambda", &params.lambda), ("g1", &params.g1), ("g2", &params.g2)] {
            if v.len() != n {
                return Err(Error::Config(format!("{name} has {} entries, expected {n}", v.len())));
            }
        }
        Ok(Self { params, f })
    }

    pub fn field(&self) -> Fp {
        self.f
    }

    fn n(&self) -> usize {
        self.params.m as usize + 3
    }

    fn names(&self, extra: &[&str]) -> Vec<String> {
        let mut v: Vec<String> = (0..self.n()).map(|i| format!("t{i}")).collect();
        v.extend(extra.iter().map(|s| s.to_string()));
        v
    }

    fn signed(v: &[u64]) -> Vec<i64> {
        v.iter().map(|&x| x as i64).collect()
    }

    fn f1(&self, nvars: usize) -> Poly {
        Poly::diagonal_quadric(nvars, &vec![1; self.n()])
    }

    fn f2(&self, nvars: usize) -> Poly {
        Poly::diagonal_quadric(nvars, &Self::signed(&self.params.lambda))
    }

    fn g1(&self, nvars: usize) -> Poly {
        Poly::linear(nvars, &Self::signed(&self.params.g1))
    }

    fn g2(&self, nvars: usize) -> Poly {
        Poly::linear(nvars, &Self::signed(&self.params.g2))
    }

    fn projective(&self, name: &str, eqs: Vec<(&str, Poly)>) -> PolySystem {
        let eqs = eqs.into_iter().map(|(s, p)| (s.to_string(), p)).collect();
        PolySystem::new(name, self.names(&[]), self.n(), eqs).expect("consistent shapes")
    }

    /// `{f_1 = 0, F = t f_2 + g_1 g_2 = 0}` in `P^{m+2} × A^1`; `t` is the
    /// variable at index `m+3`.
    pub fn total_space(&self) -> PolySystem {
        let nv = self.n() + 1;
        let t = Poly::var(nv, self.n());
        let big_f = &t * &self.f2(nv) + &self.g1(nv) * &self.g2(nv);
        let eqs = vec![("f1".to_string(), self.f1(nv)), ("F".to_string(), big_f)];
        PolySystem::new("Xhat", self.names(&["t"]), self.n(), eqs).expect("consistent shapes")
    }

    pub fn x1(&self) -> PolySystem {
        let n = self.n();
        self.projective("X1", vec![("f1", self.f1(n)), ("g1", self.g1(n))])
    }

    pub fn x2(&self) -> PolySystem {
        let n = self.n();
        self.projective("X2", vec![("f1", self.f1(n)), ("g2", self.g2(n))])
    }

    pub fn d(&self) -> PolySystem {
        let n = self.n();
        self.projective("D", vec![("f1", self.f1(n)), ("g1", self.g1(n)), ("g2", self.g2(n))])
    }

    /// `Z = {f_1 = f_2 = g_1 = g_2 = 0}` inside the `t = 0` fiber.
    pub fn z(&self) -> PolySystem {
        let n = self.n();
        self.projective("Z", vec![("f1", self.f1(n)), ("f2", self.f2(n)), ("g1", self.g1(n)), ("g2", self.g2(n))])
    }

    /// Chart `T = 1`: `{f_1, f_2 + g_1 G_2, t G_2 − g_2}` in `t_i, t, G_2`.
    pub fn chart_t(&self) -> PolySystem {
        let nv = self.n() + 2;
        let (t, g) = (Poly::var(nv, self.n()), Poly::var(nv, self.n() + 1));
        let eqs = vec![
            ("f1".to_string(), self.f1(nv)),
            ("f2+g1*G2".to_string(), self.f2(nv) + &self.g1(nv) * &g),
            ("t*G2-g2".to_string(), &t * &g - self.g2(nv)),
        ];
        PolySystem::new("chart_T", self.names(&["t", "G2"]), self.n(), eqs).expect("consistent shapes")
    }

    /// Chart `G_2 = 1`: `{f_1, T f_2 + g_1, t − g_2 T}` in `t_i, t, T`.
    pub fn chart_g2(&self) -> PolySystem {
        let nv = self.n() + 2;
        let (t, big_t) = (Poly::var(nv, self.n()), Poly::var(nv, self.n() + 1));
        let eqs = vec![
            ("f1".to_string(), self.f1(nv)),
            ("T*f2+g1".to_string(), &big_t * &self.f2(nv) + self.g1(nv)),
            ("t-g2*T".to_string(), t - &self.g2(nv) * &big_t),
        ];
        PolySystem::new("chart_G2", self.names(&["t", "T"]), self.n(), eqs).expect("consistent shapes")
    }

    /// Index of the `t` variable in `total_space` and both charts.
    pub fn t_var(&self) -> usize {
        self.n()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};
    use crate::smoothcheck::scan::jacobian_rank;

    fn family(m: u32, p: u64) -> Family {
        let f = Fp::new(p).unwrap();
        let lambda: Vec<Rational> = (0..m as i64 + 3).map(int).collect();
        let (res, _) = reduce_lambda(&lambda, f).unwrap();
        Family::new(draw_linear_forms(m, f, &res, 1, u128::MAX).unwrap().0).unwrap()
    }

    #[test]
    fn lambda_reduction() {
        let f = Fp::new(5).unwrap();
        let lambda: Vec<Rational> = (0..7).map(int).collect();
        let (res, coll) = reduce_lambda(&lambda, f).unwrap();
        assert_eq!(res, vec![0, 1, 2, 3, 4, 0, 1]);
        assert_eq!(coll, vec![[0, 5], [1, 6]]);
        assert!(reduce_lambda(&[rat(1, 5)], f).is_err());
    }

    #[test]
    fn genericity_conditions() {
        let f = Fp::new(7).unwrap();
        assert!(forms_are_generic(&[1, 0, 0], &[0, 1, 0], f));
        // (1, 2, 3)·(1, 2, 3) = 14 ≡ 0 mod 7.
        assert!(!forms_are_generic(&[1, 2, 3], &[0, 1, 0], f));
        assert!(!forms_are_generic(&[1, 0, 0], &[2, 0, 0], f));
    }

    #[test]
    fn degrees_match_the_table() {
        let fam = family(2, 7);
        let n = 5;
        let hat = fam.total_space();
        assert_eq!(hat.equations[0].1.homogeneous_degree(n), Some(2));
        assert_eq!(hat.equations[1].1.homogeneous_degree(n), Some(2));
        let z = fam.z();
        let degs: Vec<u32> = z.equations.iter().map(|(_, p)| p.degree()).collect();
        assert_eq!(degs, vec![2, 2, 1, 1]);
    }

    #[test]
    fn z_points_are_singular_on_the_total_space() {
        let fam = family(2, 7);
        let f = fam.field();
        let hat = fam.total_space();
        for x in enumerate_points(&fam.z(), f, u128::MAX).unwrap() {
            let mut y = x.clone();
            y.push(0);
            assert!(jacobian_rank(&hat, &y, f).unwrap() <= 1);
        }
    }

    #[test]
    fn chart_equations_imply_the_total_space() {
        // t·(f_2 + g_1 G_2) − g_1·(t G_2 − g_2) = t f_2 + g_1 g_2.
        let fam = family(2, 5);
        let f = fam.field();
        let hat = fam.total_space();
        for x in enumerate_points(&fam.chart_t(), f, u128::MAX).unwrap() {
            assert!(hat.is_solution(&x[..6], f));
        }
    }
}
