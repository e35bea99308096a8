//! Bookkeeping for the degeneration formula on `X ⇝ X_1 ∪_D X̃_2`.
//!
//! A term `η` fixes the `X_1` side data `(n_1, β_1, l, μ)` and which
//! insertions `e_i` go to `X_1`; the inner sum runs over classes `δ_j` of `D`
//! with half-degrees in `1..=m-1`. Only the `X_1` factor is screened: it can
//! be nonzero only if `virdim = Σ deg δ + n_1·m/2`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{int, Rational};
use crate::specialfiber::x1_restriction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeGeometry {
    pub dim: u32,
    /// `⟨β, c_1(T)⟩` per unit of `β`.
    pub c1_coeff: i64,
    /// `⟨β, D⟩` per unit of `β`.
    pub divisor_deg: i64,
}

impl RelativeGeometry {
    /// The quadric `X_1 ⊂ P^{m+1}` relative to the hyperplane section `D`:
    /// `c_1 = (m+2) − 2` and `⟨c, D⟩ = 1`.
    pub fn x1(m: u32) -> Self {
        Self { dim: m, c1_coeff: m as i64, divisor_deg: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeProblem {
    pub n: u32,
    pub l: u32,
    pub beta: u32,
    pub mu: Vec<u32>,
}

impl RelativeProblem {
    pub fn new(n: u32, beta: u32, mu: Vec<u32>) -> Result<Self> {
        if mu.contains(&0) {
            return Err(Error::Config("contact orders must be positive".into()));
        }
        if mu.iter().sum::<u32>() != beta {
            return Err(Error::Config(format!("contact orders {mu:?} do not sum to {beta}")));
        }
        Ok(Self { n, l: mu.len() as u32, beta, mu })
    }
}

/// `dim − 3 + (c_1 − D)·β + n + l`.
pub fn virdim_relative(p: &RelativeProblem, g: &RelativeGeometry) -> i64 {
    g.dim as i64 - 3 + (g.c1_coeff - g.divisor_deg) * p.beta as i64 + p.n as i64 + p.l as i64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerationTerm {
    pub n1: u32,
    pub n2: u32,
    pub beta1: u32,
    pub beta2: u32,
    pub l: u32,
    pub mu: Vec<u32>,
    /// Half-degrees of the `δ_j` on the `X_1` side.
    pub delta_degrees: Vec<u32>,
    /// Indices `i` of the insertions `e_i` placed on `X_1`.
    pub x1_insertions: Vec<usize>,
    /// False when the term was discarded before the sum over `δ`.
    pub delta_expanded: bool,
}

impl DegenerationTerm {
    pub fn relative_problem(&self) -> RelativeProblem {
        RelativeProblem { n: self.n1, l: self.l, beta: self.beta1, mu: self.mu.clone() }
    }
}

impl fmt::Display for DegenerationTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n1={} beta1={} l={} mu={:?} delta={:?} X1 insertions={:?}",
            self.n1, self.beta1, self.l, self.mu, self.delta_degrees, self.x1_insertions
        )
    }
}

/// `Σ deg δ + n_1·m/2`, in half-degree units.
pub fn degree_budget(term: &DegenerationTerm, m: u32) -> Rational {
    let deltas: u32 = term.delta_degrees.iter().sum();
    int(deltas as i64) + Rational::new((term.n1 as i64 * m as i64).into(), 2.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    ZeroInsertionRestriction,
    UnstableConfiguration,
    InequalityLBound,
    DimensionMismatch,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Reason::ZeroInsertionRestriction => "zero-insertion-restriction",
            Reason::UnstableConfiguration => "unstable-configuration",
            Reason::InequalityLBound => "inequality-l-bound",
            Reason::DimensionMismatch => "dimension-mismatch",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub vanishes: bool,
    /// First applicable reason, in the order of [`Reason`].
    pub reason: Option<Reason>,
    /// Every enabled screen that rejects the term.
    pub reasons: Vec<Reason>,
    pub details: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenOptions {
    pub zero_restriction: bool,
    pub unstable: bool,
    pub inequality: bool,
    pub dimension: bool,
}

impl Default for ScreenOptions {
    fn default() -> Self {
        Self { zero_restriction: true, unstable: true, inequality: true, dimension: true }
    }
}

/// Indices whose lift restricts to zero on `X_1`.
pub fn zero_restriction_indices(m: u32) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for i in 1..=m as usize + 3 {
        if x1_restriction(m, i)?.is_zero() {
            out.push(i);
        }
    }
    Ok(out)
}

/// `l ≤ n_1(m/2 − 1) + 3 − m`, from the dimension equation with
/// `deg δ ≤ m − 1` and `β_1 ≥ l`. This is `l ≤ 3 − m` for `n_1 = 0` and
/// `l ≤ 2 − m/2` for `n_1 = 1`.
pub fn l_bound(m: u32, n1: u32) -> i64 {
    n1 as i64 * (m as i64 / 2 - 1) + 3 - m as i64
}

pub fn inequality_rejects(term: &DegenerationTerm, m: u32) -> bool {
    term.l as i64 > l_bound(m, term.n1)
}

pub fn dimension_rejects(term: &DegenerationTerm, m: u32) -> bool {
    let v = virdim_relative(&term.relative_problem(), &RelativeGeometry::x1(m));
    int(v) != degree_budget(term, m)
}

/// Genus 0 with `β_1 = 0` needs at least three special points.
pub fn is_unstable(term: &DegenerationTerm) -> bool {
    term.beta1 == 0 && term.n1 + term.l < 3
}

pub fn vanishing_check(term: &DegenerationTerm, m: u32, zero_idx: &[usize], opts: &ScreenOptions) -> Verdict {
    let mut reasons = Vec::new();
    let mut details = Vec::new();
    if opts.zero_restriction {
        if let Some(i) = term.x1_insertions.iter().find(|i| zero_idx.contains(i)) {
            reasons.push(Reason::ZeroInsertionRestriction);
            details.push(format!("e_{i} restricts to 0 on X1"));
        }
    }
    if term.delta_expanded {
        if opts.unstable && is_unstable(term) {
            reasons.push(Reason::UnstableConfiguration);
            details.push(format!("beta1 = 0 with {} special points", term.n1 + term.l));
        }
        if opts.inequality && inequality_rejects(term, m) {
            reasons.push(Reason::InequalityLBound);
            details.push(format!("l = {} > {}", term.l, l_bound(m, term.n1)));
        }
        if opts.dimension && dimension_rejects(term, m) {
            let v = virdim_relative(&term.relative_problem(), &RelativeGeometry::x1(m));
            reasons.push(Reason::DimensionMismatch);
            details.push(format!("virdim {v} != {}", degree_budget(term, m)));
        }
    }
    Verdict { vanishes: !reasons.is_empty(), reason: reasons.first().copied(), reasons, details: details.join("; ") }
}

/// Partitions of `n` into exactly `k` positive parts, parts non-increasing.
pub fn partitions(n: u32, k: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, k: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            if n == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for part in (1..=max.min(n)).rev() {
            if n - part < k - 1 {
                continue;
            }
            prefix.push(part);
            go(n - part, k - 1, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, n, &mut Vec::new(), &mut out);
    out
}

/// Non-decreasing sequences of length `k` with entries in `lo..=hi`.
pub fn multisets(k: u32, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    fn go(k: u32, lo: u32, hi: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(prefix.clone());
            return;
        }
        for v in lo..=hi {
            prefix.push(v);
            go(k - 1, v, hi, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, lo, hi, &mut Vec::new(), &mut out);
    out
}

/// `k`-element subsets of `1..=n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for v in start..=n {
            if n - v + 1 < k - prefix.len() {
                break;
            }
            prefix.push(v);
            go(v + 1, n, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

fn check_m(m: u32) -> Result<()> {
    if m % 2 == 1 {
        return Err(Error::OddDimension(m));
    }
    if m < 2 {
        return Err(Error::DimensionOutOfRange { m, reason: "need m >= 2".into() });
    }
    Ok(())
}

/// Terms with a fixed `n_1`, in a deterministic order.
pub fn terms_for_n1(
    m: u32,
    n1: u32,
    zero_idx: &[usize],
    filter: bool,
) -> impl Iterator<Item = DegenerationTerm> + Send + '_ {
    let n = m as usize + 3;
    let half = m / 2;
    subsets(n, n1 as usize).into_iter().flat_map(move |ins| {
        let killed = filter && ins.iter().any(|i| zero_idx.contains(i));
        (0..=half).flat_map(move |beta1| {
            let ins = ins.clone();
            (0..=beta1).flat_map(move |l| {
                let ins = ins.clone();
                partitions(beta1, l).into_iter().flat_map(move |mu| {
                    let deltas = if killed { vec![Vec::new()] } else { multisets(l, 1, m - 1) };
                    let ins = ins.clone();
                    deltas.into_iter().map(move |delta_degrees| DegenerationTerm {
                        n1,
                        n2: m + 3 - n1,
                        beta1,
                        beta2: half - beta1,
                        l,
                        mu: mu.clone(),
                        delta_degrees,
                        x1_insertions: ins.clone(),
                        delta_expanded: !killed,
                    })
                })
            })
        })
    })
}

/// Every term of the degeneration formula for `⟨τ_0(e_1)…τ_0(e_{m+3})⟩_{0,m+3,m/2}`.
/// With `filter`, terms with a vanishing `X_1` insertion skip the `δ` sum.
pub fn enumerate_terms(m: u32, filter: bool) -> Result<impl Iterator<Item = DegenerationTerm>> {
    check_m(m)?;
    let zero_idx = zero_restriction_indices(m)?;
    Ok((0..=m + 3).flat_map(move |n1| terms_for_n1(m, n1, &zero_idx, filter).collect::<Vec<_>>()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Vanishes,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerationReport {
    pub m: u32,
    pub options: ScreenOptions,
    pub total_terms: u64,
    pub delta_expanded_terms: u64,
    /// Terms by first reason.
    pub census: BTreeMap<Reason, u64>,
    /// Terms rejected by each screen, counted independently.
    pub screen_rejections: BTreeMap<Reason, u64>,
    pub survivor_count: u64,
    /// The first survivors, in enumeration order.
    pub survivors: Vec<DegenerationTerm>,
    /// Terms where exactly one of the inequality and dimension screens rejects.
    pub screen_disagreements: u64,
    /// Terms rejected by the l-bound that still satisfy the dimension equation.
    pub inequality_only_rejections: u64,
    pub outcome: Outcome,
    /// The value of the correlator when every term vanishes.
    pub correlator: Option<i64>,
    pub notes: Vec<String>,
}

const MAX_SURVIVORS_LISTED: usize = 32;

#[derive(Default)]
struct Tally {
    total: u64,
    expanded: u64,
    census: BTreeMap<Reason, u64>,
    rejections: BTreeMap<Reason, u64>,
    survivors: u64,
    listed: Vec<DegenerationTerm>,
    disagreements: u64,
    inequality_only: u64,
}

impl Tally {
    fn add(&mut self, term: DegenerationTerm, m: u32, zero_idx: &[usize], opts: &ScreenOptions) {
        self.total += 1;
        let v = vanishing_check(&term, m, zero_idx, opts);
        if term.delta_expanded {
            self.expanded += 1;
            let (ineq, dim) = (inequality_rejects(&term, m), dimension_rejects(&term, m));
            self.disagreements += u64::from(ineq != dim);
            self.inequality_only += u64::from(ineq && !dim);
        }
        for r in &v.reasons {
            *self.rejections.entry(*r).or_default() += 1;
        }
        match v.reason {
            Some(r) => *self.census.entry(r).or_default() += 1,
            None => {
                self.survivors += 1;
                if self.listed.len() < MAX_SURVIVORS_LISTED {
                    self.listed.push(term);
                }
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        self.expanded += other.expanded;
        for (k, v) in other.census {
            *self.census.entry(k).or_default() += v;
        }
        for (k, v) in other.rejections {
            *self.rejections.entry(k).or_default() += v;
        }
        self.survivors += other.survivors;
        let room = MAX_SURVIVORS_LISTED.saturating_sub(self.listed.len());
        self.listed.extend(other.listed.into_iter().take(room));
        self.disagreements += other.disagreements;
        self.inequality_only += other.inequality_only;
        self
    }
}

pub fn degeneration_report(m: u32, opts: ScreenOptions) -> Result<DegenerationReport> {
    check_m(m)?;
    let zero_idx = zero_restriction_indices(m)?;
    let tallies: Vec<Tally> = (0..=m + 3)
        .into_par_iter()
        .map(|n1| {
            let mut t = Tally::default();
            for term in terms_for_n1(m, n1, &zero_idx, opts.zero_restriction) {
                t.add(term, m, &zero_idx, &opts);
            }
            t
        })
        .collect();
    let t = tallies.into_iter().fold(Tally::default(), Tally::merge);
    let outcome = if t.survivors == 0 { Outcome::Vanishes } else { Outcome::Inconclusive };
    let mut notes = vec![
        "only the X1-side relative invariant is screened; the X2-side factor is never evaluated".to_string(),
        format!("delta half-degrees range over 1..={}; degree 0 and top-degree classes of D are excluded", m - 1),
    ];
    if m == 2 {
        notes.push("m = 2 is the degree 4 del Pezzo surface, outside the reach of this argument".into());
    }
    Ok(DegenerationReport {
        m,
        options: opts,
        total_terms: t.total,
        delta_expanded_terms: t.expanded,
        census: t.census,
        screen_rejections: t.rejections,
        survivor_count: t.survivors,
        survivors: t.listed,
        screen_disagreements: t.disagreements,
        inequality_only_rejections: t.inequality_only,
        outcome,
        correlator: (outcome == Outcome::Vanishes).then_some(0),
        notes,
    })
}

/// The full screen for `⟨τ_0(e_1)…τ_0(e_{m+3})⟩_{0,m+3,m/2}`.
pub fn main_correlator_report(m: u32) -> Result<DegenerationReport> {
    degeneration_report(m, ScreenOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(m: u32, n1: u32, beta1: u32, mu: Vec<u32>, delta: Vec<u32>, ins: Vec<usize>) -> DegenerationTerm {
        DegenerationTerm {
            n1,
            n2: m + 3 - n1,
            beta1,
            beta2: m / 2 - beta1,
            l: mu.len() as u32,
            mu,
            delta_degrees: delta,
            x1_insertions: ins,
            delta_expanded: true,
        }
    }

    #[test]
    fn virdim_examples() {
        let g4 = RelativeGeometry::x1(4);
        assert_eq!(virdim_relative(&RelativeProblem::new(0, 1, vec![1]).unwrap(), &g4), 5);
        assert_eq!(virdim_relative(&RelativeProblem::new(1, 0, vec![]).unwrap(), &g4), 2);
        // Re-derived: (m − 3) + (c1 − 1)β + n + l with c1 = m for a quadric in P^{m+1}.
        let g6 = RelativeGeometry::x1(6);
        let p = RelativeProblem::new(1, 2, vec![1, 1]).unwrap();
        assert_eq!(virdim_relative(&p, &g6), (6 - 3) + 5 * 2 + 1 + 2);
        assert_eq!(virdim_relative(&p, &g6), 16);
        assert!(RelativeProblem::new(0, 2, vec![1]).is_err());
        assert!(RelativeProblem::new(0, 1, vec![1, 0]).is_err());
    }

    #[test]
    fn budget_examples() {
        assert_eq!(degree_budget(&term(4, 0, 1, vec![1], vec![1], vec![]), 4), int(1));
        assert_eq!(degree_budget(&term(4, 1, 0, vec![], vec![], vec![6]), 4), int(2));
        assert_eq!(degree_budget(&term(4, 1, 2, vec![1, 1], vec![3, 3], vec![6]), 4), int(8));
    }

    #[test]
    fn combinatorics() {
        assert_eq!(partitions(4, 2), vec![vec![3, 1], vec![2, 2]]);
        assert_eq!(partitions(0, 0), vec![Vec::<u32>::new()]);
        assert!(partitions(2, 3).is_empty());
        assert_eq!(multisets(2, 1, 3).len(), 6);
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn zero_restrictions() {
        assert_eq!(zero_restriction_indices(4).unwrap(), vec![1, 2, 3, 4, 5, 7]);
    }

    #[test]
    fn verdict_examples() {
        let z = zero_restriction_indices(4).unwrap();
        let o = ScreenOptions::default();
        // Two insertions on X1: at least one restricts to zero.
        let t = term(4, 2, 1, vec![1], vec![3], vec![1, 6]);
        assert_eq!(vanishing_check(&t, 4, &z, &o).reason, Some(Reason::ZeroInsertionRestriction));
        // d would have to be 5 > m − 1.
        for d in 1..=3 {
            let v = vanishing_check(&term(4, 0, 1, vec![1], vec![d], vec![]), 4, &z, &o);
            assert_eq!(v.reason, Some(Reason::InequalityLBound));
            assert!(v.reasons.contains(&Reason::DimensionMismatch));
        }
        let v = vanishing_check(&term(4, 0, 0, vec![], vec![], vec![]), 4, &z, &o);
        assert_eq!(v.reasons[0], Reason::UnstableConfiguration);
        assert!(v.reasons.contains(&Reason::DimensionMismatch));
        // n1 = 1, beta1 = 0 at m = 4 passes both numeric screens.
        let v = vanishing_check(&term(4, 1, 0, vec![], vec![], vec![6]), 4, &z, &o);
        assert_eq!(v.reasons, vec![Reason::UnstableConfiguration]);
    }

    #[test]
    fn m2_candidate_survives() {
        let z = zero_restriction_indices(2).unwrap();
        let v = vanishing_check(&term(2, 0, 1, vec![1], vec![1], vec![]), 2, &z, &ScreenOptions::default());
        assert!(!v.vanishes);
        assert_eq!(l_bound(2, 0), 1);
    }

    #[test]
    fn correlator_vanishes_for_m4() {
        let r = main_correlator_report(4).unwrap();
        assert_eq!(r.survivor_count, 0);
        assert_eq!(r.correlator, Some(0));
        assert_eq!(r.screen_disagreements, 0);
        assert_eq!(r.total_terms, enumerate_terms(4, true).unwrap().count() as u64);
    }

    #[test]
    fn the_zero_restriction_filter_is_needed() {
        let off = ScreenOptions { zero_restriction: false, ..ScreenOptions::default() };
        let r = degeneration_report(4, off).unwrap();
        assert!(r.survivor_count > 0);
        assert!(r.delta_expanded_terms > main_correlator_report(4).unwrap().delta_expanded_terms);
        // virdim 1 + 3 + 2 + 1 = 7 = 3 + 2·2.
        let t = term(4, 2, 1, vec![1], vec![3], vec![1, 2]);
        assert!(!dimension_rejects(&t, 4) && !inequality_rejects(&t, 4));
    }

    #[test]
    fn m2_is_inconclusive() {
        let r = main_correlator_report(2).unwrap();
        assert!(r.survivor_count >= 1);
        assert_eq!(r.outcome, Outcome::Inconclusive);
        assert_eq!(r.correlator, None);
        assert_eq!(main_correlator_report(3).unwrap_err(), Error::OddDimension(3));
    }
}
