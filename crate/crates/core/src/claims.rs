//! Verification harness for the lemmas, theorems and conjecture about k-RNN.
//!
//! Every check compares a heuristic or tree weight against an oracle value and
//! records strict and non-strict satisfaction separately. Proven bounds
//! (`theorem3`, `mst_bound`) are expected to hold on every input; the others
//! are reporting checks whose outcome is data, not an assertion.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{optimal_tour, shortest_ham_path, Method};
use crate::heuristics::{krnn, KrnnConfig};
use crate::instance::{is_metric, random_instance, DistanceKind, GeneratorKind, Instance, Mode};
use crate::spanning::{prim_mst, tour_spanning_trees, tree4};

pub const SCHEMA_VERSION: u32 = 1;
pub const RELATIVE_TOLERANCE: f64 = 1e-9;
pub const COUNTEREXAMPLE_CAP: usize = 32;
pub const THEOREM3_BOUND: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimId {
    Lemma1,
    Lemma2,
    Theorem1,
    Theorem2,
    Theorem3,
    MstBound,
    Theorem4Ratio,
    ConjectureK,
}

impl ClaimId {
    pub const ALL: [ClaimId; 8] = [
        ClaimId::Lemma1,
        ClaimId::Lemma2,
        ClaimId::Theorem1,
        ClaimId::Theorem2,
        ClaimId::Theorem3,
        ClaimId::MstBound,
        ClaimId::Theorem4Ratio,
        ClaimId::ConjectureK,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ClaimId::Lemma1 => "lemma1",
            ClaimId::Lemma2 => "lemma2",
            ClaimId::Theorem1 => "theorem1",
            ClaimId::Theorem2 => "theorem2",
            ClaimId::Theorem3 => "theorem3",
            ClaimId::MstBound => "mst_bound",
            ClaimId::Theorem4Ratio => "theorem4_ratio",
            ClaimId::ConjectureK => "conjecture_k",
        }
    }

    /// Claims established elsewhere; a violation means a defect here.
    pub fn is_proven(self) -> bool {
        matches!(self, ClaimId::Theorem3 | ClaimId::MstBound)
    }

    /// Ratio claim id for prefix length `k`.
    pub fn ratio_for(k: usize) -> ClaimId {
        if k == 2 {
            ClaimId::Theorem4Ratio
        } else {
            ClaimId::ConjectureK
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for ClaimId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.replace('-', "_");
        match s.as_str() {
            "ratio" | "theorem4" => return Ok(ClaimId::Theorem4Ratio),
            "conjecture" => return Ok(ClaimId::ConjectureK),
            _ => {}
        }
        ClaimId::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| format!("unknown claim {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub instance_kind: GeneratorKind,
    pub n: usize,
    pub trials: u64,
    pub base_seed: u64,
    pub metric_required: bool,
}

impl TrialPlan {
    pub fn new(instance_kind: GeneratorKind, n: usize, trials: u64, base_seed: u64) -> Self {
        Self {
            instance_kind,
            n,
            trials,
            base_seed,
            metric_required: false,
        }
    }

    pub fn metric(mut self) -> Self {
        self.metric_required = true;
        self
    }

    pub fn seed(&self, trial: u64) -> u64 {
        self.base_seed.wrapping_add(trial)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CaseSource {
    Generated { kind: GeneratorKind, seed: u64 },
    Named { name: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub source: CaseSource,
    pub n: usize,
    pub summary: String,
    pub observed: BTreeMap<String, f64>,
}

impl Counterexample {
    fn sort_key(&self) -> (usize, u64, &str) {
        match &self.source {
            CaseSource::Generated { seed, .. } => (self.n, *seed, ""),
            CaseSource::Named { name } => (self.n, u64::MAX, name),
        }
    }
}

/// Satisfaction counts for one reading of a multi-inequality claim.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadingCounts {
    pub checked: u64,
    pub strict_held: u64,
    pub non_strict_held: u64,
}

impl ReadingCounts {
    fn add(&mut self, other: ReadingCounts) {
        self.checked += other.checked;
        self.strict_held += other.strict_held;
        self.non_strict_held += other.non_strict_held;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimVerdict {
    pub claim_id: ClaimId,
    pub subject: String,
    pub regimes: Vec<String>,
    pub plan: Option<TrialPlan>,
    pub k: Option<usize>,
    pub trials: u64,
    /// Trials where the claim fails in its stated strict form.
    pub violations: u64,
    /// Trials where it fails even with `<` relaxed to `<=`.
    pub non_strict_violations: u64,
    pub errors: u64,
    /// Theorem 1 only: every individual `Cost(TS_i) < Cost(S)` inequality.
    pub inequalities: Option<ReadingCounts>,
    /// Theorem 1 only: the weaker `min_i Cost(TS_i) < Cost(S)` reading, per trial.
    pub weak_reading: Option<ReadingCounts>,
    pub worst_ratio: Option<f64>,
    pub bound: Option<f64>,
    pub mst_max_degree: Option<usize>,
    pub proven: bool,
    pub note: Option<String>,
    pub counterexamples: Vec<Counterexample>,
}

impl ClaimVerdict {
    fn empty(claim_id: ClaimId, subject: impl Into<String>) -> Self {
        Self {
            claim_id,
            subject: subject.into(),
            regimes: Vec::new(),
            plan: None,
            k: None,
            trials: 0,
            violations: 0,
            non_strict_violations: 0,
            errors: 0,
            inequalities: None,
            weak_reading: None,
            worst_ratio: None,
            bound: None,
            mst_max_degree: None,
            proven: claim_id.is_proven(),
            note: None,
            counterexamples: Vec::new(),
        }
    }

    /// A proven claim that failed or could not be evaluated.
    pub fn is_defect(&self) -> bool {
        self.proven && (self.violations > 0 || self.errors > 0)
    }

    /// Aggregates verdicts of the same claim over several inputs.
    pub fn merge(claim_id: ClaimId, subject: impl Into<String>, parts: Vec<ClaimVerdict>) -> Self {
        let mut out = ClaimVerdict::empty(claim_id, subject);
        let mut bounds = Vec::new();
        let mut notes = Vec::new();
        for part in parts {
            debug_assert_eq!(part.claim_id, claim_id);
            out.k = out.k.or(part.k);
            out.trials += part.trials;
            out.violations += part.violations;
            out.non_strict_violations += part.non_strict_violations;
            out.errors += part.errors;
            out.proven &= part.proven;
            merge_counts(&mut out.inequalities, part.inequalities);
            merge_counts(&mut out.weak_reading, part.weak_reading);
            out.worst_ratio = max_opt(out.worst_ratio, part.worst_ratio);
            out.mst_max_degree = out.mst_max_degree.max(part.mst_max_degree);
            bounds.push(part.bound);
            if let Some(note) = part.note {
                notes.push(note);
            }
            out.regimes.extend(part.regimes);
            out.counterexamples.extend(part.counterexamples);
        }
        out.regimes.sort();
        out.regimes.dedup();
        out.bound = match bounds.split_first() {
            Some((first, rest)) if rest.iter().all(|b| b == first) => *first,
            _ => None,
        };
        notes.sort();
        notes.dedup();
        notes.truncate(4);
        if !notes.is_empty() {
            out.note = Some(notes.join("; "));
        }
        out.finish_counterexamples();
        out
    }

    fn finish_counterexamples(&mut self) {
        self.counterexamples
            .sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        self.counterexamples.truncate(COUNTEREXAMPLE_CAP);
    }
}

fn merge_counts(acc: &mut Option<ReadingCounts>, part: Option<ReadingCounts>) {
    if let Some(part) = part {
        acc.get_or_insert_with(ReadingCounts::default).add(part);
    }
}

fn max_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub schema_version: u32,
    pub generated_at: Option<String>,
    pub verdicts: Vec<ClaimVerdict>,
}

impl VerdictDocument {
    pub fn new(verdicts: Vec<ClaimVerdict>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            generated_at: None,
            verdicts,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("verdicts serialize");
        s.push('\n');
        s
    }
}

/// Three-way comparison: exact on integral instances, otherwise equal within
/// [`RELATIVE_TOLERANCE`] of the larger magnitude.
pub fn compare(lhs: f64, rhs: f64, exact: bool) -> Ordering {
    if !exact {
        let tol = RELATIVE_TOLERANCE * lhs.abs().max(rhs.abs());
        if (lhs - rhs).abs() <= tol {
            return Ordering::Equal;
        }
    }
    lhs.partial_cmp(&rhs).unwrap_or(Ordering::Equal)
}

/// Outcome of one `lhs < rhs` (or `lhs <= rhs`) test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Check {
    strict: bool,
    non_strict: bool,
}

impl Check {
    fn less(lhs: f64, rhs: f64, exact: bool) -> Self {
        let ord = compare(lhs, rhs, exact);
        Check {
            strict: ord == Ordering::Less,
            non_strict: ord != Ordering::Greater,
        }
    }

    fn counts(self) -> ReadingCounts {
        ReadingCounts {
            checked: 1,
            strict_held: self.strict as u64,
            non_strict_held: self.non_strict as u64,
        }
    }
}

/// Evaluation of a claim on one instance.
struct Trial {
    check: Check,
    /// Whether the claim's own form is `<=` rather than `<`.
    claim_is_non_strict: bool,
    inequalities: Option<ReadingCounts>,
    weak: Option<Check>,
    ratio: Option<f64>,
    bound: Option<f64>,
    mst_max_degree: Option<usize>,
    observed: BTreeMap<String, f64>,
}

impl Trial {
    fn violated(&self) -> bool {
        if self.claim_is_non_strict {
            !self.check.non_strict
        } else {
            !self.check.strict
        }
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

fn observed<const N: usize>(pairs: [(&str, f64); N]) -> BTreeMap<String, f64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn lemma_trial(instance: &Instance) -> Result<Trial> {
    let heuristic = krnn(instance, &KrnnConfig::new(2, Mode::Path))?.best.cost();
    let exact = shortest_ham_path(instance, Method::BruteForce)?.optimum_cost;
    Ok(Trial {
        check: Check::less(heuristic, exact, instance.is_integral()),
        claim_is_non_strict: true,
        inequalities: None,
        weak: None,
        ratio: ratio(heuristic, exact),
        bound: Some(1.0),
        mst_max_degree: None,
        observed: observed([("heuristic", heuristic), ("exact", exact)]),
    })
}

fn metric_precondition(instance: &Instance) -> Result<()> {
    let scale = instance.dense_matrix().into_iter().fold(0.0f64, f64::max);
    if is_metric(instance, RELATIVE_TOLERANCE * scale) {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "lemma2 requires a metric instance; {} violates the triangle inequality",
            instance.name()
        )))
    }
}

fn size_precondition(claim: ClaimId, instance: &Instance, n: usize) -> Result<()> {
    if instance.n() == n {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{claim} is stated for n = {n}, got n = {}",
            instance.n()
        )))
    }
}

/// 2-RNN tour and the degree-4 tree of the Prim MST.
struct Pipeline {
    tour_cost: f64,
    tree_weights: Vec<f64>,
    s_weight: f64,
    mst_max_degree: usize,
}

fn pipeline(instance: &Instance) -> Result<Pipeline> {
    let tour = krnn(instance, &KrnnConfig::new(2, Mode::Tour))?.best;
    let tour = tour.as_tour().expect("tour mode");
    let mst = prim_mst(instance);
    let s = tree4(instance, &mst)?;
    Ok(Pipeline {
        tour_cost: tour.cost(),
        tree_weights: tour_spanning_trees(instance, tour)
            .iter()
            .map(|t| t.total_weight())
            .collect(),
        s_weight: s.total_weight(),
        mst_max_degree: mst.max_degree(),
    })
}

fn theorem1_trial(instance: &Instance) -> Result<Trial> {
    let p = pipeline(instance)?;
    let exact = instance.is_integral();
    let mut all = ReadingCounts::default();
    for &w in &p.tree_weights {
        all.add(Check::less(w, p.s_weight, exact).counts());
    }
    let min_ts = p.tree_weights.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ts = p.tree_weights.iter().copied().fold(0.0, f64::max);
    let held = |count: u64| count == all.checked;
    Ok(Trial {
        check: Check {
            strict: held(all.strict_held),
            non_strict: held(all.non_strict_held),
        },
        claim_is_non_strict: false,
        inequalities: Some(all),
        weak: Some(Check::less(min_ts, p.s_weight, exact)),
        ratio: ratio(max_ts, p.s_weight),
        bound: Some(1.0),
        mst_max_degree: Some(p.mst_max_degree),
        observed: observed([
            ("tour", p.tour_cost),
            ("s_weight", p.s_weight),
            ("min_ts", min_ts),
            ("max_ts", max_ts),
        ]),
    })
}

fn theorem2_trial(instance: &Instance) -> Result<Trial> {
    let p = pipeline(instance)?;
    let n = instance.n() as f64;
    Ok(Trial {
        check: Check::less(
            (n - 1.0) * p.tour_cost,
            n * p.s_weight,
            instance.is_integral(),
        ),
        claim_is_non_strict: false,
        inequalities: None,
        weak: None,
        ratio: ratio(p.tour_cost, p.s_weight),
        bound: Some(n / (n - 1.0)),
        mst_max_degree: Some(p.mst_max_degree),
        observed: observed([("tour", p.tour_cost), ("s_weight", p.s_weight)]),
    })
}

fn theorem3_trial(instance: &Instance) -> Result<Trial> {
    let mst = prim_mst(instance);
    let s = tree4(instance, &mst)?;
    let (t, m) = (s.total_weight(), mst.total_weight());
    Ok(Trial {
        check: Check::less(4.0 * t, 5.0 * m, instance.is_integral()),
        claim_is_non_strict: true,
        inequalities: None,
        weak: None,
        ratio: ratio(t, m),
        bound: Some(THEOREM3_BOUND),
        mst_max_degree: Some(mst.max_degree()),
        observed: observed([
            ("tree4", t),
            ("mst", m),
            ("tree4_max_degree", s.max_degree() as f64),
        ]),
    })
}

fn mst_bound_trial(instance: &Instance, optimum: f64) -> Result<Trial> {
    check_optimum(optimum)?;
    let m = prim_mst(instance).total_weight();
    let n = instance.n() as f64;
    Ok(Trial {
        check: Check::less(n * m, (n - 1.0) * optimum, instance.is_integral()),
        claim_is_non_strict: true,
        inequalities: None,
        weak: None,
        ratio: ratio(m, optimum),
        bound: Some(1.0 - 1.0 / n),
        mst_max_degree: None,
        observed: observed([("mst", m), ("optimum", optimum)]),
    })
}

fn ratio_trial(instance: &Instance, optimum: f64, k: usize) -> Result<Trial> {
    check_optimum(optimum)?;
    let cost = krnn(instance, &KrnnConfig::new(k, Mode::Tour))?.best.cost();
    let k2 = (k * k) as f64;
    Ok(Trial {
        check: Check::less(k2 * cost, (k2 + 1.0) * optimum, instance.is_integral()),
        claim_is_non_strict: false,
        inequalities: None,
        weak: None,
        ratio: ratio(cost, optimum),
        bound: Some((k2 + 1.0) / k2),
        mst_max_degree: None,
        observed: observed([("heuristic", cost), ("optimum", optimum)]),
    })
}

fn check_optimum(optimum: f64) -> Result<()> {
    if optimum > 0.0 && optimum.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidOptimum(optimum))
    }
}

fn summary(instance: &Instance) -> String {
    format!(
        "{} ({}, n={})",
        instance.name(),
        instance.regime(),
        instance.n()
    )
}

/// Whether a proven bound applies to this instance's geometry.
fn proven_applies(claim: ClaimId, instance: &Instance) -> bool {
    match claim {
        // The degree-4 tree bound is a theorem about exact planar distances.
        ClaimId::Theorem3 => instance.distance_kind() == Some(DistanceKind::Euclidean),
        ClaimId::MstBound => true,
        _ => false,
    }
}

fn single(
    claim: ClaimId,
    instance: &Instance,
    source: CaseSource,
    k: Option<usize>,
    trial: Trial,
) -> ClaimVerdict {
    let mut v = ClaimVerdict::empty(claim, instance.name());
    v.regimes = vec![instance.regime().to_string()];
    v.k = k;
    v.trials = 1;
    v.proven = proven_applies(claim, instance);
    if claim == ClaimId::Theorem3 && !v.proven {
        v.note = Some("bound reported only; proven for exact planar distances".into());
    }
    let violated = trial.violated();
    v.violations = violated as u64;
    v.non_strict_violations = (!trial.check.non_strict) as u64;
    v.inequalities = trial.inequalities;
    v.weak_reading = trial.weak.map(Check::counts);
    v.worst_ratio = trial.ratio;
    v.bound = trial.bound;
    v.mst_max_degree = trial.mst_max_degree;
    if violated {
        v.counterexamples.push(Counterexample {
            source,
            n: instance.n(),
            summary: summary(instance),
            observed: trial.observed,
        });
        if v.proven {
            v.note = Some("proven bound violated: implementation defect".into());
        }
    }
    v
}

fn named(instance: &Instance) -> CaseSource {
    CaseSource::Named {
        name: instance.name().to_string(),
    }
}

pub fn check_lemma1_instance(instance: &Instance) -> Result<ClaimVerdict> {
    size_precondition(ClaimId::Lemma1, instance, 4)?;
    let t = lemma_trial(instance)?;
    Ok(single(
        ClaimId::Lemma1,
        instance,
        named(instance),
        Some(2),
        t,
    ))
}

pub fn check_lemma2_instance(instance: &Instance) -> Result<ClaimVerdict> {
    size_precondition(ClaimId::Lemma2, instance, 5)?;
    metric_precondition(instance)?;
    let t = lemma_trial(instance)?;
    Ok(single(
        ClaimId::Lemma2,
        instance,
        named(instance),
        Some(2),
        t,
    ))
}

pub fn check_theorem1(instance: &Instance) -> Result<ClaimVerdict> {
    let t = theorem1_trial(instance)?;
    Ok(single(
        ClaimId::Theorem1,
        instance,
        named(instance),
        Some(2),
        t,
    ))
}

pub fn check_theorem2(instance: &Instance) -> Result<ClaimVerdict> {
    let t = theorem2_trial(instance)?;
    Ok(single(
        ClaimId::Theorem2,
        instance,
        named(instance),
        Some(2),
        t,
    ))
}

pub fn check_theorem3(instance: &Instance) -> Result<ClaimVerdict> {
    let t = theorem3_trial(instance)?;
    Ok(single(
        ClaimId::Theorem3,
        instance,
        named(instance),
        None,
        t,
    ))
}

pub fn check_mst_bound(instance: &Instance, optimum: f64) -> Result<ClaimVerdict> {
    let t = mst_bound_trial(instance, optimum)?;
    Ok(single(
        ClaimId::MstBound,
        instance,
        named(instance),
        None,
        t,
    ))
}

pub fn check_ratio_bound(instance: &Instance, optimum: f64, k: usize) -> Result<ClaimVerdict> {
    let t = ratio_trial(instance, optimum, k)?;
    Ok(single(
        ClaimId::ratio_for(k),
        instance,
        named(instance),
        Some(k),
        t,
    ))
}

fn plan_precondition(claim: ClaimId, plan: &TrialPlan) -> Result<()> {
    if plan.trials == 0 {
        return Err(Error::Precondition(
            "a trial plan needs at least one trial".into(),
        ));
    }
    if plan.n < 2 {
        return Err(Error::InvalidSize(format!(
            "n must be at least 2, got {}",
            plan.n
        )));
    }
    let required_n = match claim {
        ClaimId::Lemma1 => Some(4),
        ClaimId::Lemma2 => Some(5),
        _ => None,
    };
    if let Some(n) = required_n {
        if plan.n != n {
            return Err(Error::Precondition(format!(
                "{claim} is stated for n = {n}, got n = {}",
                plan.n
            )));
        }
    }
    let metric_required = plan.metric_required || claim == ClaimId::Lemma2;
    if metric_required && !plan.instance_kind.is_metric() {
        return Err(Error::Precondition(format!(
            "{claim} requires metric instances; {} is not",
            plan.instance_kind
        )));
    }
    Ok(())
}

/// Runs `claim` on `plan.trials` generated instances with seeds
/// `base_seed + i`. Mst-bound and ratio plans use the exact optimum.
pub fn check_plan(claim: ClaimId, plan: &TrialPlan, k: usize) -> Result<ClaimVerdict> {
    plan_precondition(claim, plan)?;
    let parts: Vec<ClaimVerdict> = (0..plan.trials)
        .into_par_iter()
        .map(|i| {
            generated_trial(
                claim,
                plan.instance_kind,
                plan.n,
                plan.seed(i),
                k,
                plan.metric_required,
            )
        })
        .collect();
    let subject = format!("{} n={} x{}", plan.instance_kind, plan.n, plan.trials);
    let mut merged = ClaimVerdict::merge(claim, subject, parts);
    merged.plan = Some(*plan);
    Ok(merged)
}

fn generated_trial(
    claim: ClaimId,
    kind: GeneratorKind,
    n: usize,
    seed: u64,
    k: usize,
    metric_required: bool,
) -> ClaimVerdict {
    let source = CaseSource::Generated { kind, seed };
    let outcome = random_instance(kind, n, seed).and_then(|inst| {
        if metric_required || claim == ClaimId::Lemma2 {
            metric_precondition(&inst)?;
        }
        let (trial, k) = evaluate(claim, &inst, None, k)?;
        Ok(single(claim, &inst, source, k, trial))
    });
    outcome.unwrap_or_else(|e| {
        let mut v = ClaimVerdict::empty(claim, format!("{kind}-n{n}-s{seed}"));
        v.trials = 1;
        v.errors = 1;
        v.note = Some(format!("trial error: {e}"));
        v
    })
}

/// Trial for any claim; the optimum is computed exactly when not given.
fn evaluate(
    claim: ClaimId,
    instance: &Instance,
    optimum: Option<f64>,
    k: usize,
) -> Result<(Trial, Option<usize>)> {
    let optimum = || match optimum {
        Some(o) => Ok(o),
        None => optimal_tour(instance).map(|r| r.optimum_cost),
    };
    Ok(match claim {
        ClaimId::Lemma1 | ClaimId::Lemma2 => (lemma_trial(instance)?, Some(2)),
        ClaimId::Theorem1 => (theorem1_trial(instance)?, Some(2)),
        ClaimId::Theorem2 => (theorem2_trial(instance)?, Some(2)),
        ClaimId::Theorem3 => (theorem3_trial(instance)?, None),
        ClaimId::MstBound => (mst_bound_trial(instance, optimum()?)?, None),
        ClaimId::Theorem4Ratio | ClaimId::ConjectureK => {
            (ratio_trial(instance, optimum()?, k)?, Some(k))
        }
    })
}

pub fn check_lemma1(plan: &TrialPlan) -> Result<ClaimVerdict> {
    check_plan(ClaimId::Lemma1, plan, 2)
}

pub fn check_lemma2(plan: &TrialPlan) -> Result<ClaimVerdict> {
    check_plan(ClaimId::Lemma2, plan, 2)
}

/// Re-runs an archived counterexample. Named cases are resolved to an
/// instance and its optimum (if the claim needs one) by `resolve`.
pub fn replay(
    claim: ClaimId,
    k: Option<usize>,
    case: &Counterexample,
    resolve: &dyn Fn(&str) -> Result<(Instance, Option<f64>)>,
) -> Result<ClaimVerdict> {
    let k = k.unwrap_or(2);
    let (instance, optimum) = match &case.source {
        CaseSource::Generated { kind, seed } => (random_instance(*kind, case.n, *seed)?, None),
        CaseSource::Named { name } => resolve(name)?,
    };
    if claim == ClaimId::Lemma2 {
        metric_precondition(&instance)?;
    }
    let (trial, k) = evaluate(claim, &instance, optimum, k)?;
    Ok(single(claim, &instance, case.source.clone(), k, trial))
}
