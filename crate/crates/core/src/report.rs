//! Runs the checks behind each CLI subcommand and assembles the report.

use std::fmt::Write as _;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chern::{euler_char, primitive_middle_dim, CIDescriptor};
use crate::cohomology::{
    expected_integral_gram_det, full_signature, integral_gram_det, lattice_index, primitive_gram, MiddleLattice,
};
use crate::error::{Error, Result};
use crate::exactmath::{fmt_rational, int, Rational};
use crate::geombasis::{lagrange_weights, plane_check, power_sum, verify_points_on_quadrics, LambdaConfig};
use crate::gwcount::{main_correlator_report, Outcome};
use crate::smoothcheck::{
    chart_smoothness_check, singular_locus_check, LinearForms, SmoothConfig, DEFAULT_BUDGET, DEFAULT_PRIMES,
};
use crate::specialfiber::{
    expected_fiber_gram, fiber_basis_len, fiber_gram, kernel_matches_named_basis, mv_kernel, named_basis,
    restriction_map,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Euler,
    Cohomology,
    Fiber,
    Geombasis,
    Smoothness,
    Degeneration,
    Full,
}

impl Subcommand {
    fn sections(self) -> &'static [Subcommand] {
        use Subcommand::*;
        match self {
            Full => &[Euler, Cohomology, Fiber, Geombasis, Smoothness, Degeneration],
            Euler => &[Euler],
            Cohomology => &[Cohomology],
            Fiber => &[Fiber],
            Geombasis => &[Geombasis],
            Smoothness => &[Smoothness],
            Degeneration => &[Degeneration],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Subcommand::Euler => "euler",
            Subcommand::Cohomology => "cohomology",
            Subcommand::Fiber => "fiber",
            Subcommand::Geombasis => "geombasis",
            Subcommand::Smoothness => "smoothness",
            Subcommand::Degeneration => "degeneration",
            Subcommand::Full => "full",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub m: u32,
    /// Rendered as `a` or `a/b`.
    pub lambda: Vec<String>,
    pub primes: Vec<u64>,
    /// False when `primes` are the defaults; infeasible defaults are skipped.
    pub primes_explicit: bool,
    pub seed: u64,
    pub trials: u32,
    pub budget: u64,
    pub strict_lambda: bool,
}

impl RunConfig {
    pub fn new(m: u32) -> Self {
        Self {
            m,
            lambda: (0..m as i64 + 3).map(|i| i.to_string()).collect(),
            primes: DEFAULT_PRIMES.to_vec(),
            primes_explicit: false,
            seed: 0,
            trials: 100,
            budget: DEFAULT_BUDGET as u64,
            strict_lambda: false,
        }
    }

    pub fn validate(&self) -> Result<LambdaConfig> {
        if self.m % 2 == 1 {
            return Err(Error::OddDimension(self.m));
        }
        if self.m < 2 {
            return Err(Error::DimensionOutOfRange { m: self.m, reason: "need m >= 2".into() });
        }
        if self.primes.is_empty() {
            return Err(Error::Config("no primes given".into()));
        }
        for &p in &self.primes {
            crate::smoothcheck::fp::Fp::new(p)?;
        }
        let lambda = self
            .lambda
            .iter()
            .map(|s| crate::exactmath::parse_rational(s).ok_or_else(|| Error::Config(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<Rational>>>()?;
        LambdaConfig::for_m(self.m, lambda)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Inconclusive,
    Discrepancy,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified => 0,
            Status::Discrepancy => 2,
            Status::Inconclusive => 3,
        }
    }
}

/// One reproduced statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub claim: String,
    pub detail: String,
    pub passed: bool,
}

impl Check {
    fn new(claim: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { claim: claim.into(), detail: detail.into(), passed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionReport {
    pub name: String,
    pub status: Status,
    pub summary: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub data: Value,
}

impl SectionReport {
    fn from_checks(name: &str, summary: String, checks: Vec<Check>, data: Value) -> Self {
        let status = if checks.iter().all(|c| c.passed) { Status::Verified } else { Status::Discrepancy };
        Self { name: name.into(), status, summary, checks, notes: Vec::new(), data }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullReport {
    pub tool: String,
    pub version: String,
    pub command: Subcommand,
    pub config: RunConfig,
    pub sections: Vec<SectionReport>,
    /// Worst section status.
    pub status: Status,
    pub correlator: Option<String>,
}

impl FullReport {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("bad report: {e}")))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command.name());
        let _ = writeln!(out, "m: {}", self.config.m);
        for s in &self.sections {
            let _ = writeln!(out, "[{}] {}", s.name, status_word(s.status));
            let _ = writeln!(out, "  {}", s.summary);
            for c in &s.checks {
                let _ = writeln!(out, "  {} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.claim, c.detail);
            }
            for n in &s.notes {
                let _ = writeln!(out, "  note: {n}");
            }
        }
        let _ = writeln!(out, "status: {}", status_word(self.status));
        if let Some(c) = &self.correlator {
            let _ = writeln!(out, "correlator = {c}");
        }
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Verified => "verified",
        Status::Inconclusive => "inconclusive",
        Status::Discrepancy => "discrepancy",
    }
}

fn big(v: &num_bigint::BigInt) -> Value {
    v.to_i64().map_or_else(|| json!(v.to_string()), |x| json!(x))
}

pub fn euler_section(m: u32) -> Result<SectionReport> {
    let ci = CIDescriptor::quadric_pencil(m);
    let chi = euler_char(&ci)?;
    let prim = primitive_middle_dim(&ci)?;
    let checks = vec![
        Check::new("chi(X) = 2m+4", chi == (2 * m as i64 + 4).into(), format!("computed {chi}")),
        Check::new("dim H^m_prim(X) = m+3", prim == m as u64 + 3, format!("computed {prim}")),
    ];
    let data = json!({ "chi": big(&chi), "prim_rank": prim, "degree": big(&ci.degree()) });
    Ok(SectionReport::from_checks("euler", format!("χ = {chi}, prim rank = {prim}"), checks, data))
}

pub fn cohomology_section(m: u32) -> Result<SectionReport> {
    if m < 4 {
        return Ok(SectionReport {
            name: "cohomology".into(),
            status: Status::Inconclusive,
            summary: "lattice statements need m >= 4".into(),
            checks: Vec::new(),
            notes: vec![format!("m = {m} is below the range of the integral basis")],
            data: Value::Null,
        });
    }
    let det = integral_gram_det(m)?;
    let expected = expected_integral_gram_det(m);
    let index = lattice_index(m)?;
    let (_, prim_sig) = primitive_gram(m)?;
    let full_sig = full_signature(&MiddleLattice::new(m)?)?;
    let checks = vec![
        Check::new(
            "integral Gram determinant = (-1)^{m/2}",
            det == expected,
            format!("computed {}, expected {}", fmt_rational(&det), fmt_rational(&expected)),
        ),
        Check::new(
            "index of Z<omega^{m/2}> + H^m_prim(X,Z) in H^m(X,Z) = 4",
            index == 4.into(),
            format!("computed {index}"),
        ),
        Check::new(
            "full signature = primitive signature + one positive",
            full_sig.positive == prim_sig.positive + 1
                && full_sig.negative == prim_sig.negative
                && full_sig.zero == 0
                && prim_sig.zero == 0,
            format!("primitive {prim_sig:?}, full {full_sig:?}"),
        ),
    ];
    let data = json!({
        "integral_gram_det": fmt_rational(&det),
        "lattice_index": big(&index),
        "primitive_signature": prim_sig,
        "full_signature": full_sig,
    });
    let summary = format!("det = {}, index = {index}", fmt_rational(&det));
    Ok(SectionReport::from_checks("cohomology", summary, checks, data))
}

pub fn fiber_section(m: u32) -> Result<SectionReport> {
    let kernel = mv_kernel(m);
    let basis = named_basis(m);
    let gram = fiber_gram(m)?;
    let r = restriction_map(m)?;
    let rk = r.kernel();
    let kernel_is_h1_hz = rk.len() == 1 && rk[0].iter().enumerate().all(|(j, c)| (j == 1) != c.is_zero());
    let checks = vec![
        Check::new(
            "Mayer-Vietoris kernel has the named basis",
            kernel_matches_named_basis(m)? && kernel.len() == basis.len(),
            format!("kernel dim {} in a sum of dim {}", kernel.len(), fiber_basis_len(m)),
        ),
        Check::new(
            "fiber pairing = int aa' + int bb' - int cc'",
            gram == expected_fiber_gram(m),
            "Gram diag(4, 0, 1, 1, -1, ..., -1)",
        ),
        Check::new(
            "restriction has the diagonal matrix",
            r.rank() == m as usize + 4,
            format!("rank {} of a {}x{} matrix", r.rank(), r.matrix.rows(), r.matrix.cols()),
        ),
        Check::new("restriction kernel = span(H1, HZ - H2)", kernel_is_h1_hz, format!("kernel dim {}", rk.len())),
        Check::new(
            "restriction preserves the pairing, <e_i, e_j> = -delta_ij",
            r.preserves_pairing_hermitian()?,
            "sesquilinear extension of the target Gram",
        ),
    ];
    let data = json!({
        "kernel_dim": kernel.len(),
        "basis": r.source_labels,
        "targets": r.target_labels,
        "restriction_rank": r.rank(),
    });
    let summary = format!("kernel dim = {}, restriction rank = {}", kernel.len(), r.rank());
    let mut s = SectionReport::from_checks("fiber", summary, checks, data);
    s.notes.push("the special fiber has one more class than the generic fiber; the extra class restricts to 0".into());
    Ok(s)
}

pub fn geombasis_section(cfg: &LambdaConfig, trials: u32, seed: u64) -> Result<SectionReport> {
    let m = cfg.m().ok_or_else(|| Error::Config("lambda length must be m+3".into()))?;
    let sums: Vec<Rational> = (0..=m + 2).map(|p| power_sum(cfg, p)).collect();
    let low_zero = sums[..=m as usize + 1].iter().all(|s| *s == int(0));
    let top_one = sums[m as usize + 2] == int(1);
    let plane = plane_check(cfg, trials, seed)?;
    let checks = vec![
        Check::new("sum c_i lambda_i^p = 0 for p <= m+1", low_zero, format!("{} power sums", m + 2)),
        Check::new("sum c_i lambda_i^{m+2} = 1", top_one, format!("computed {}", fmt_rational(&sums[m as usize + 2]))),
        Check::new(
            "the points p_k lie on both quadrics",
            verify_points_on_quadrics(cfg)?,
            format!("k = 0..={}", m / 2),
        ),
        Check::new(
            "the plane spanned by the points lies in X",
            plane.passed(),
            format!("{} trials, {} failures", plane.trials, plane.failures),
        ),
    ];
    let weights: Vec<String> = lagrange_weights(cfg).c.iter().map(fmt_rational).collect();
    let data = json!({ "weights": weights, "plane_trials": plane.trials, "seed": seed });
    let summary = format!("{} weights, {} plane trials", weights.len(), plane.trials);
    Ok(SectionReport::from_checks("geombasis", summary, checks, data))
}

pub fn smoothness_section(cfg: &RunConfig, lambda: &[Rational]) -> Result<SectionReport> {
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let mut reports = Vec::new();
    let mut scanned = Vec::new();
    for &p in &cfg.primes {
        let sc = SmoothConfig {
            lambda: lambda.to_vec(),
            forms: LinearForms::Drawn { seed: cfg.seed },
            budget: cfg.budget as u128,
            strict_lambda: cfg.strict_lambda,
            ..SmoothConfig::new(cfg.m, p)
        };
        if let Err(e) = sc.check_budget() {
            if cfg.primes_explicit {
                return Err(e);
            }
            notes.push(format!("p = {p} skipped: {e}; raise --budget or pass --primes"));
            continue;
        }
        let sing = singular_locus_check(&sc)?;
        let chart = chart_smoothness_check(&sc)?;
        if !sing.lambda_collisions.is_empty() {
            notes.push(format!("p = {p}: lambda collisions {:?} modulo p", sing.lambda_collisions));
        }
        let mut seen = std::collections::BTreeSet::new();
        for r in [&sing, &chart] {
            for s in r.sections.iter().filter(|s| seen.insert(s.name.clone())) {
                checks.push(Check::new(
                    &format!("p = {p}: {}", s.claim),
                    s.passed,
                    format!("{}: {} points, {} failures", s.name, s.points, s.failures),
                ));
            }
        }
        scanned.push(p);
        reports.push(json!({ "p": p, "singular_locus": sing, "charts": chart }));
    }
    notes.push(crate::smoothcheck::CAVEAT.into());
    let summary = format!("primes scanned: {scanned:?}");
    let mut s = SectionReport::from_checks("smoothness", summary, checks, json!(reports));
    if scanned.is_empty() {
        s.status = Status::Inconclusive;
    }
    s.notes = notes;
    Ok(s)
}

pub fn degeneration_section(m: u32) -> Result<SectionReport> {
    let r = main_correlator_report(m)?;
    let census: Vec<String> = r.census.iter().map(|(k, v)| format!("{k} {v}")).collect();
    let mut checks = vec![Check::new(
        "terms rejected by the l-bound fail the dimension equation",
        r.inequality_only_rejections == 0,
        format!("{} delta-expanded terms, {} counterexamples", r.delta_expanded_terms, r.inequality_only_rejections),
    )];
    if m >= 4 {
        checks.push(Check::new(
            "l-bound screen and dimension equation agree term by term",
            r.screen_disagreements == 0,
            format!("{} disagreements", r.screen_disagreements),
        ));
    }
    let summary = format!("{} terms, {} surviving; {}", r.total_terms, r.survivor_count, census.join(", "));
    let mut s =
        SectionReport::from_checks("degeneration", summary, checks, serde_json::to_value(&r).expect("serializes"));
    if r.outcome == Outcome::Inconclusive && s.status == Status::Verified {
        s.status = Status::Inconclusive;
    }
    s.notes = r.notes.clone();
    Ok(s)
}

/// Runs every section of `cmd`; errors are configuration errors.
pub fn run(cmd: Subcommand, cfg: &RunConfig) -> Result<FullReport> {
    let lambda_cfg = cfg.validate()?;
    let m = cfg.m;
    let mut sections = Vec::new();
    let mut correlator = None;
    for &sec in cmd.sections() {
        let s = match sec {
            Subcommand::Euler => euler_section(m)?,
            Subcommand::Cohomology => cohomology_section(m)?,
            Subcommand::Fiber => fiber_section(m)?,
            Subcommand::Geombasis => geombasis_section(&lambda_cfg, cfg.trials, cfg.seed)?,
            Subcommand::Smoothness => smoothness_section(cfg, lambda_cfg.lambdas())?,
            Subcommand::Degeneration => {
                let s = degeneration_section(m)?;
                correlator = Some(match s.status {
                    Status::Verified => "0".to_string(),
                    Status::Inconclusive => "inconclusive".to_string(),
                    Status::Discrepancy => "unknown".to_string(),
                });
                s
            }
            Subcommand::Full => unreachable!("full expands to its sections"),
        };
        sections.push(s);
    }
    let status = sections.iter().map(|s| s.status).max().unwrap_or(Status::Verified);
    Ok(FullReport {
        tool: "qpencil".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cmd,
        config: cfg.clone(),
        sections,
        status,
        correlator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_summary_line() {
        let s = euler_section(10).unwrap();
        assert_eq!(s.summary, "χ = 24, prim rank = 13");
        assert_eq!(s.status, Status::Verified);
    }

    #[test]
    fn invalid_configs() {
        assert_eq!(RunConfig::new(5).validate().unwrap_err(), Error::OddDimension(5));
        let mut c = RunConfig::new(4);
        c.primes = vec![9];
        assert!(c.validate().is_err());
        c = RunConfig::new(4);
        c.lambda[1] = "0".into();
        assert!(c.validate().is_err());
        c.lambda = vec!["1/2".into(); 3];
        assert!(c.validate().is_err());
    }

    #[test]
    fn degeneration_m2_is_inconclusive() {
        let r = run(Subcommand::Degeneration, &RunConfig::new(2)).unwrap();
        assert_eq!(r.status, Status::Inconclusive);
        assert_eq!(r.exit_code(), 3);
        assert_eq!(r.correlator.as_deref(), Some("inconclusive"));
    }

    #[test]
    fn sections_pass_for_m4() {
        let cfg = RunConfig { trials: 10, ..RunConfig::new(4) };
        for cmd in [Subcommand::Cohomology, Subcommand::Fiber, Subcommand::Geombasis, Subcommand::Degeneration] {
            let r = run(cmd, &cfg).unwrap();
            assert_eq!(r.status, Status::Verified, "{}", r.to_text());
        }
    }

    #[test]
    fn explicit_infeasible_prime_is_an_error() {
        let cfg = RunConfig { primes: vec![11], primes_explicit: true, budget: 1000, ..RunConfig::new(4) };
        assert!(matches!(run(Subcommand::Smoothness, &cfg), Err(Error::BudgetExceeded { .. })));
        let cfg = RunConfig { budget: 1000, ..RunConfig::new(4) };
        let r = run(Subcommand::Smoothness, &cfg).unwrap();
        assert_eq!(r.status, Status::Inconclusive);
    }
}
