//! Brute-force point enumeration and Jacobian ranks over `F_p`.
//!
//! Variables are split into a projective block `x_0..x_{n-1}` and trailing
//! affine variables. A projective point is stored with its first nonzero
//! coordinate equal to 1, so for systems that are not homogeneous (blow-up
//! charts) the equations are read in the standard affine chart of that
//! coordinate.

use std::collections::BTreeMap;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::fp::{rank_mod_p, Fp};
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    pub name: String,
    pub var_names: Vec<String>,
    pub n_proj: usize,
    pub equations: Vec<(String, Poly)>,
}

impl PolySystem {
    pub fn new(name: &str, var_names: Vec<String>, n_proj: usize, equations: Vec<(String, Poly)>) -> Result<Self> {
        if n_proj > var_names.len() {
            return Err(Error::Config(format!("{name}: {n_proj} projective of {} variables", var_names.len())));
        }
        if let Some((eq, _)) = equations.iter().find(|(_, p)| p.nvars() != var_names.len()) {
            return Err(Error::Config(format!("{name}: equation {eq} has the wrong variable count")));
        }
        Ok(Self { name: name.into(), var_names, n_proj, equations })
    }

    pub fn n_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn n_affine(&self) -> usize {
        self.n_vars() - self.n_proj
    }

    pub fn render(&self, eq: usize) -> String {
        self.equations[eq].1.render(&self.var_names)
    }

    /// Hex SHA-256 of each rendered equation, keyed `system/equation`.
    pub fn equation_hashes(&self) -> BTreeMap<String, String> {
        (0..self.equations.len())
            .map(|i| {
                let digest = Sha256::digest(self.render(i).as_bytes());
                (format!("{}/{}", self.name, self.equations[i].0), hex::encode(digest))
            })
            .collect()
    }

    pub fn is_solution(&self, x: &[u64], f: Fp) -> bool {
        self.equations.iter().all(|(_, e)| e.eval(x, f) == 0)
    }
}

/// Number of candidates a scan visits when `fixed` affine variables are pinned.
pub fn scan_cost(system: &PolySystem, p: u64, fixed: usize) -> u128 {
    let free = system.n_affine().saturating_sub(fixed) as u32;
    let proj = if system.n_proj == 0 {
        1
    } else {
        let p = p as u128;
        (p.pow(system.n_proj as u32) - 1) / (p - 1)
    };
    proj.saturating_mul((p as u128).saturating_pow(free))
}

struct Term {
    coeff: u64,
    factors: Vec<(usize, u32)>,
}

impl Term {
    #[inline]
    fn eval(&self, x: &[u64], f: Fp) -> u64 {
        self.factors.iter().fold(self.coeff, |acc, &(v, k)| {
            let mut r = acc;
            for _ in 0..k {
                r = f.mul(r, x[v]);
            }
            r
        })
    }
}

/// Monomial in the free variables, as `(variable, exponent)` pairs.
type Monomial = Vec<(usize, u32)>;

/// An equation written as `Σ_α c_α(x) y^α` in the free affine variables `y`.
struct Staged {
    groups: Vec<(Monomial, Vec<Term>)>,
}

impl Staged {
    fn new(poly: &Poly, free: &[usize], f: Fp) -> Self {
        let mut groups: BTreeMap<Monomial, Vec<Term>> = BTreeMap::new();
        for (e, c) in poly.terms() {
            let key: Vec<(usize, u32)> = free.iter().filter(|&&v| e[v] > 0).map(|&v| (v, e[v])).collect();
            let factors =
                e.iter().enumerate().filter(|&(v, &k)| k > 0 && !free.contains(&v)).map(|(v, &k)| (v, k)).collect();
            groups.entry(key).or_default().push(Term { coeff: f.reduce(c), factors });
        }
        Self { groups: groups.into_iter().collect() }
    }

    fn is_constant(&self) -> bool {
        self.groups.iter().all(|(k, _)| k.is_empty())
    }

    fn coefficients(&self, x: &[u64], f: Fp) -> Vec<u64> {
        self.groups.iter().map(|(_, terms)| terms.iter().fold(0, |acc, t| f.add(acc, t.eval(x, f)))).collect()
    }

    #[inline]
    fn eval_with(&self, coeffs: &[u64], x: &[u64], f: Fp) -> u64 {
        self.groups.iter().zip(coeffs).fold(0, |acc, ((mono, _), &c)| {
            if c == 0 {
                return acc;
            }
            let v = mono.iter().fold(c, |r, &(v, k)| (0..k).fold(r, |r, _| f.mul(r, x[v])));
            f.add(acc, v)
        })
    }
}

/// Every `F_p` point of `system` with the listed affine variables pinned.
pub fn enumerate_points_fixed(
    system: &PolySystem,
    f: Fp,
    fixed: &[(usize, u64)],
    budget: u128,
) -> Result<Vec<Vec<u64>>> {
    if let Some(&(v, _)) = fixed.iter().find(|&&(v, _)| v < system.n_proj || v >= system.n_vars()) {
        return Err(Error::Config(format!("variable {v} is not an affine variable")));
    }
    let cost = scan_cost(system, f.p(), fixed.len());
    if cost > budget {
        return Err(Error::BudgetExceeded { points: cost, budget });
    }
    let free: Vec<usize> = (system.n_proj..system.n_vars()).filter(|v| !fixed.iter().any(|&(w, _)| w == *v)).collect();
    let staged: Vec<Staged> = system.equations.iter().map(|(_, e)| Staged::new(e, &free, f)).collect();
    let (first, second): (Vec<&Staged>, Vec<&Staged>) = staged.iter().partition(|s| s.is_constant());

    let mut base = vec![0u64; system.n_vars()];
    for &(v, val) in fixed {
        base[v] = val % f.p();
    }
    let n = system.n_proj;
    let p = f.p();

    let visit = |x: &mut Vec<u64>, out: &mut Vec<Vec<u64>>| {
        if first.iter().any(|s| s.eval_with(&s.coefficients(x, f), x, f) != 0) {
            return;
        }
        let coeffs: Vec<Vec<u64>> = second.iter().map(|s| s.coefficients(x, f)).collect();
        for v in &free {
            x[*v] = 0;
        }
        loop {
            if second.iter().zip(&coeffs).all(|(s, c)| s.eval_with(c, x, f) == 0) {
                out.push(x.clone());
            }
            if !odometer(x, &free, p) {
                break;
            }
        }
    };

    if n == 0 {
        let mut out = Vec::new();
        visit(&mut base.clone(), &mut out);
        return Ok(out);
    }

    let mut points = Vec::new();
    for j in 0..n {
        // Chart j: x_j = 1, x_i = 0 for i < j, the rest free. Split on up to
        // two leading free coordinates for parallel blocks.
        let tail: Vec<usize> = (j + 1..n).collect();
        let split = tail.len().min(2);
        let (outer, inner) = tail.split_at(split);
        let blocks = p.pow(split as u32);
        let chunk: Vec<Vec<Vec<u64>>> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut x = base.clone();
                x[j] = 1;
                let mut rest = b;
                for &v in outer.iter().rev() {
                    x[v] = rest % p;
                    rest /= p;
                }
                let mut out = Vec::new();
                loop {
                    visit(&mut x, &mut out);
                    if !odometer(&mut x, inner, p) {
                        break;
                    }
                }
                out
            })
            .collect();
        points.extend(chunk.into_iter().flatten());
    }
    Ok(points)
}

/// All `F_p` points, affine variables ranging over `F_p`.
pub fn enumerate_points(system: &PolySystem, f: Fp, budget: u128) -> Result<Vec<Vec<u64>>> {
    enumerate_points_fixed(system, f, &[], budget)
}

/// Advances `vars` of `x` as a base-`p` counter; false once it wraps to zero.
fn odometer(x: &mut [u64], vars: &[usize], p: u64) -> bool {
    for &v in vars.iter().rev() {
        x[v] += 1;
        if x[v] < p {
            return true;
        }
        x[v] = 0;
    }
    false
}

/// Formal partial derivatives of a system, for repeated rank evaluation.
pub struct Jacobian {
    n_proj: usize,
    partials: Vec<Vec<Poly>>,
}

impl Jacobian {
    pub fn new(system: &PolySystem) -> Self {
        let partials =
            system.equations.iter().map(|(_, e)| (0..system.n_vars()).map(|v| e.partial(v)).collect()).collect();
        Self { n_proj: system.n_proj, partials }
    }

    /// Rank over `F_p` with the chart coordinate (first nonzero projective
    /// entry) removed from the variables.
    pub fn rank_at(&self, x: &[u64], f: Fp) -> Result<usize> {
        let skip = if self.n_proj == 0 {
            None
        } else {
            Some(x[..self.n_proj].iter().position(|&v| v % f.p() != 0).ok_or(Error::NotOnVariety)?)
        };
        let rows = self
            .partials
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(v, _)| Some(v) != skip).map(|(_, d)| d.eval(x, f)).collect())
            .collect();
        Ok(rank_mod_p(rows, f))
    }
}

/// Rank of the Jacobian of `system` at a point of it.
pub fn jacobian_rank(system: &PolySystem, x: &[u64], f: Fp) -> Result<usize> {
    if x.len() != system.n_vars() || !system.is_solution(x, f) {
        return Err(Error::NotOnVariety);
    }
    Jacobian::new(system).rank_at(x, f)
}
