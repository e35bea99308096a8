//! Finite-field scans of the degeneration family.
//!
//! Over `F_p` every point is visited and the Jacobian rank is computed
//! exactly. Agreement at a few primes is evidence for the statements over
//! `C`, not a proof. Fibers with `t ≠ 0` are only required to be smooth near
//! `t = 0`, so their statistics are reported but never affect the verdict.

pub mod family;
pub mod fp;
pub mod poly;
pub mod scan;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use family::{draw_linear_forms, forms_are_generic, reduce_lambda, Family, FamilyParams};
pub use fp::{is_prime, rank_mod_p, Fp};
pub use poly::Poly;
pub use scan::{enumerate_points, enumerate_points_fixed, jacobian_rank, scan_cost, Jacobian, PolySystem};

use crate::error::{Error, Result};
use crate::exactmath::{int, Rational};

pub const DEFAULT_PRIMES: [u64; 3] = [5, 7, 11];

/// Largest number of candidates a single scan may visit.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// Discrepancies kept verbatim in a report; the rest are only counted.
const MAX_LISTED: usize = 16;

pub const CAVEAT: &str = "finite-field scan: agreement modulo p is evidence for the statement over C, not a proof; \
fibers with t != 0 are informational";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinearForms {
    /// Seeded draw with re-draws on degeneracy.
    Drawn { seed: u64 },
    /// Used as given, even when degenerate.
    Explicit { g1: Vec<i64>, g2: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothConfig {
    pub m: u32,
    pub p: u64,
    pub lambda: Vec<Rational>,
    pub forms: LinearForms,
    /// `t ≠ 0` fibers to tabulate; `None` means all of `F_p^*`.
    pub t_samples: Option<Vec<u64>>,
    pub budget: u128,
    /// Treat `λ_i ≡ λ_j mod p` as an error instead of a flagged warning.
    pub strict_lambda: bool,
}

impl SmoothConfig {
    pub fn new(m: u32, p: u64) -> Self {
        Self {
            m,
            p,
            lambda: (0..m as i64 + 3).map(int).collect(),
            forms: LinearForms::Drawn { seed: 0 },
            t_samples: None,
            budget: DEFAULT_BUDGET,
            strict_lambda: false,
        }
    }

    /// Candidates visited by the largest scan (a blow-up chart).
    pub fn largest_scan(&self) -> u128 {
        let p = self.p as u128;
        let n = self.m + 3;
        (p.pow(n) - 1) / (p - 1) * p * p
    }

    pub fn check_budget(&self) -> Result<()> {
        let points = self.largest_scan();
        if points > self.budget {
            return Err(Error::BudgetExceeded { points, budget: self.budget });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub claim: String,
    pub points: u64,
    pub expected_rank: usize,
    pub failures: u64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub section: String,
    pub point: Vec<u64>,
    pub rank: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberStat {
    pub system: String,
    pub t: u64,
    pub points: u64,
    pub rank_deficient: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub check: String,
    pub m: u32,
    pub p: u64,
    pub lambda_residues: Vec<u64>,
    pub lambda_collisions: Vec<[usize; 2]>,
    pub g1: Vec<u64>,
    pub g2: Vec<u64>,
    /// Draws needed for generic forms; 0 when the forms were given.
    pub g_draws: usize,
    pub equation_hashes: BTreeMap<String, String>,
    pub sections: Vec<Section>,
    pub discrepancies: Vec<Discrepancy>,
    pub discrepancy_count: u64,
    pub informational: Vec<FiberStat>,
    pub passed: bool,
    pub caveat: String,
}

struct Prepared {
    family: Family,
    collisions: Vec<[usize; 2]>,
    draws: usize,
}

fn prepare(cfg: &SmoothConfig) -> Result<Prepared> {
    if cfg.m % 2 == 1 {
        return Err(Error::OddDimension(cfg.m));
    }
    if cfg.m < 2 {
        return Err(Error::DimensionOutOfRange { m: cfg.m, reason: "need m >= 2".into() });
    }
    let f = Fp::new(cfg.p)?;
    let n = cfg.m as usize + 3;
    if cfg.lambda.len() != n {
        return Err(Error::LambdaCount { got: cfg.lambda.len(), expected: n });
    }
    cfg.check_budget()?;
    let (lambda, collisions) = reduce_lambda(&cfg.lambda, f)?;
    if cfg.strict_lambda && !collisions.is_empty() {
        let detail = collisions.iter().map(|[i, j]| format!("lambda_{i} = lambda_{j}")).collect::<Vec<_>>().join(", ");
        return Err(Error::LambdaCollision { p: cfg.p, detail });
    }
    let (params, draws) = match &cfg.forms {
        LinearForms::Drawn { seed } => draw_linear_forms(cfg.m, f, &lambda, *seed, cfg.budget)?,
        LinearForms::Explicit { g1, g2 } => {
            let g1 = g1.iter().map(|&c| f.reduce(c)).collect();
            let g2 = g2.iter().map(|&c| f.reduce(c)).collect();
            (FamilyParams { m: cfg.m, p: cfg.p, lambda, g1, g2 }, 0)
        }
    };
    Ok(Prepared { family: Family::new(params)?, collisions, draws })
}

struct Builder {
    report: SmoothnessReport,
}

impl Builder {
    fn new(check: &str, prep: &Prepared, systems: &[&PolySystem]) -> Self {
        let params = &prep.family.params;
        let equation_hashes = systems.iter().flat_map(|s| s.equation_hashes()).collect();
        Self {
            report: SmoothnessReport {
                check: check.into(),
                m: params.m,
                p: params.p,
                lambda_residues: params.lambda.clone(),
                lambda_collisions: prep.collisions.clone(),
                g1: params.g1.clone(),
                g2: params.g2.clone(),
                g_draws: prep.draws,
                equation_hashes,
                sections: Vec::new(),
                discrepancies: Vec::new(),
                discrepancy_count: 0,
                informational: Vec::new(),
                passed: true,
                caveat: CAVEAT.into(),
            },
        }
    }

    fn discrepancy(&mut self, section: &str, point: &[u64], rank: usize, detail: &str) {
        self.report.discrepancy_count += 1;
        if self.report.discrepancies.len() < MAX_LISTED {
            self.report.discrepancies.push(Discrepancy {
                section: section.into(),
                point: point.to_vec(),
                rank,
                detail: detail.into(),
            });
        }
    }

    fn section(&mut self, name: &str, claim: &str, points: u64, expected_rank: usize, failures: u64) {
        let passed = failures == 0;
        self.report.passed &= passed;
        self.report.sections.push(Section {
            name: name.into(),
            claim: claim.into(),
            points,
            expected_rank,
            failures,
            passed,
        });
    }

    /// Every point of `system` must have Jacobian rank equal to its number of equations.
    fn full_rank(&mut self, name: &str, claim: &str, system: &PolySystem, f: Fp, budget: u128) -> Result<()> {
        let jac = Jacobian::new(system);
        let expected = system.equations.len();
        let points = enumerate_points(system, f, budget)?;
        let mut failures = 0;
        for x in &points {
            let r = jac.rank_at(x, f)?;
            if r < expected {
                failures += 1;
                self.discrepancy(name, x, r, &format!("rank {r} < {expected}"));
            }
        }
        self.section(name, claim, points.len() as u64, expected, failures);
        Ok(())
    }

    fn components(&mut self, fam: &Family, budget: u128) -> Result<()> {
        let f = fam.field();
        self.full_rank("X1 smooth", "X1 = {t = f1 = g1 = 0} is smooth", &fam.x1(), f, budget)?;
        self.full_rank("X2 smooth", "X2 = {t = f1 = g2 = 0} is smooth", &fam.x2(), f, budget)?;
        self.d_and_z(fam, budget)
    }

    fn d_and_z(&mut self, fam: &Family, budget: u128) -> Result<()> {
        let f = fam.field();
        self.full_rank("D transversal", "intersection along D is transversal", &fam.d(), f, budget)?;
        self.full_rank("Z smooth", "df1, df2, dg1, dg2 are independent along Z", &fam.z(), f, budget)
    }
}

fn t_filter(cfg: &SmoothConfig) -> BTreeSet<u64> {
    match &cfg.t_samples {
        Some(ts) => ts.iter().map(|t| t % cfg.p).filter(|&t| t != 0).collect(),
        None => (1..cfg.p).collect(),
    }
}

/// Compares the rank-deficient locus of `X̂` at `t = 0` with
/// `Z = {t = f_1 = f_2 = g_1 = g_2 = 0}` pointwise, and checks that the
/// components `X_1`, `X_2`, the divisor `D` and `Z` are smooth.
pub fn singular_locus_check(cfg: &SmoothConfig) -> Result<SmoothnessReport> {
    let prep = prepare(cfg)?;
    let fam = &prep.family;
    let f = fam.field();
    let (hat, z) = (fam.total_space(), fam.z());
    let systems = [&hat, &fam.x1(), &fam.x2(), &fam.d(), &z];
    let mut b = Builder::new("singular-locus", &prep, &systems);

    let jac = Jacobian::new(&hat);
    let tv = fam.t_var();
    let hat_points = enumerate_points(&hat, f, cfg.budget)?;
    let z_set: BTreeSet<Vec<u64>> = enumerate_points(&z, f, cfg.budget)?.into_iter().collect();

    let mut singular_t0 = BTreeSet::new();
    let mut stats: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
    let samples = t_filter(cfg);
    for x in &hat_points {
        let t = x[tv];
        if t != 0 && !samples.contains(&t) {
            continue;
        }
        let r = jac.rank_at(x, f)?;
        if t == 0 {
            if r < 2 {
                singular_t0.insert(x[..tv].to_vec());
            }
        } else {
            let e = stats.entry(t).or_default();
            e.0 += 1;
            e.1 += u64::from(r < 2);
        }
    }
    let name = "t=0 singular set";
    let mut failures = 0;
    for x in singular_t0.difference(&z_set) {
        failures += 1;
        b.discrepancy(name, x, 1, "rank-deficient point outside Z");
    }
    for x in z_set.difference(&singular_t0) {
        failures += 1;
        b.discrepancy(name, x, 2, "point of Z where the Jacobian has full rank");
    }
    let union = singular_t0.union(&z_set).count() as u64;
    b.section(name, "{rank < 2} = {t = f1 = f2 = g1 = g2 = 0}", union, 2, failures);
    b.report.informational = stats
        .into_iter()
        .map(|(t, (points, rank_deficient))| FiberStat { system: "Xhat".into(), t, points, rank_deficient })
        .collect();
    b.components(fam, cfg.budget)?;
    Ok(b.report)
}

/// Jacobian ranks on both blow-up charts: rank 3 at every point over `t = 0`,
/// together with transversality along `D` and smoothness of `Z`.
pub fn chart_smoothness_check(cfg: &SmoothConfig) -> Result<SmoothnessReport> {
    let prep = prepare(cfg)?;
    let fam = &prep.family;
    let f = fam.field();
    let charts = [fam.chart_t(), fam.chart_g2()];
    let (d, z) = (fam.d(), fam.z());
    let mut b = Builder::new("chart-smoothness", &prep, &[&charts[0], &charts[1], &d, &z]);
    let tv = fam.t_var();
    let samples = t_filter(cfg);
    for chart in &charts {
        let jac = Jacobian::new(chart);
        let mut stats: BTreeMap<u64, (u64, u64)> = BTreeMap::new();
        let (mut points, mut failures) = (0, 0);
        let name = format!("{} rank 3 over t=0", chart.name);
        for x in enumerate_points(chart, f, cfg.budget)? {
            let t = x[tv];
            if t != 0 && !samples.contains(&t) {
                continue;
            }
            let r = jac.rank_at(&x, f)?;
            if t == 0 {
                points += 1;
                if r < 3 {
                    failures += 1;
                    b.discrepancy(&name, &x, r, &format!("rank {r} < 3"));
                }
            } else {
                let e = stats.entry(t).or_default();
                e.0 += 1;
                e.1 += u64::from(r < 3);
            }
        }
        b.section(&name, "the blow-up total space is smooth over t = 0", points, 3, failures);
        b.report.informational.extend(stats.into_iter().map(|(t, (points, rank_deficient))| FiberStat {
            system: chart.name.clone(),
            t,
            points,
            rank_deficient,
        }));
    }
    b.d_and_z(fam, cfg.budget)?;
    Ok(b.report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m2_smoke() {
        let r = singular_locus_check(&SmoothConfig::new(2, 5)).unwrap();
        assert!(r.passed, "{r:#?}");
        let r = chart_smoothness_check(&SmoothConfig::new(2, 5)).unwrap();
        assert!(r.passed, "{r:#?}");
        assert_eq!(r.sections.len(), 4);
    }

    #[test]
    fn equal_forms_are_caught() {
        let mut cfg = SmoothConfig::new(2, 7);
        let g = vec![1, 3, 0, 2, 5];
        cfg.forms = LinearForms::Explicit { g1: g.clone(), g2: g };
        let r = singular_locus_check(&cfg).unwrap();
        assert!(!r.passed);
        assert!(r.discrepancy_count > 0);
        let d = r.sections.iter().find(|s| s.name == "D transversal").unwrap();
        assert!(!d.passed);
    }

    #[test]
    fn strict_lambda_rejects_collisions() {
        let mut cfg = SmoothConfig::new(4, 5);
        cfg.strict_lambda = true;
        assert!(matches!(singular_locus_check(&cfg), Err(Error::LambdaCollision { p: 5, .. })));
    }

    #[test]
    fn config_errors() {
        assert_eq!(singular_locus_check(&SmoothConfig::new(3, 5)).unwrap_err(), Error::OddDimension(3));
        assert_eq!(singular_locus_check(&SmoothConfig::new(2, 9)).unwrap_err(), Error::NotOddPrime(9));
        let mut cfg = SmoothConfig::new(4, 11);
        cfg.budget = 1000;
        assert!(matches!(chart_smoothness_check(&cfg), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn report_is_deterministic() {
        let cfg = SmoothConfig::new(2, 7);
        let a = serde_json::to_string(&singular_locus_check(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&singular_locus_check(&cfg).unwrap()).unwrap();
        assert_eq!(a, b);
        let back: SmoothnessReport = serde_json::from_str(&a).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), a);
    }
}
