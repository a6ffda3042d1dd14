//! Exhaustive checks of the separating property, the information-theoretic
//! lower bound, and the random-plan baseline.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::construction::{build_query_plan, power_sum, power_sum_witness, QueryPlan};
use crate::decode::MarkedSet;
use crate::error::{Error, Result};
use crate::f2linalg::{BitMatrix, BitVector};
use crate::gf2m::{FieldElement, FieldSpec};
use crate::subsets::{subset_count, ColumnTable};

/// Upper bound on subset evaluations an exhaustive check may perform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WorkCap(pub u128);

impl WorkCap {
    pub const DEFAULT: WorkCap = WorkCap(10_000_000);

    fn check(self, required: u128) -> Result<()> {
        if required > self.0 {
            return Err(Error::WorkCapExceeded { required, cap: self.0 });
        }
        Ok(())
    }
}

impl Default for WorkCap {
    fn default() -> Self {
        WorkCap::DEFAULT
    }
}

/// First pair `X != Y` with `|X|, |Y| <= d` and equal answers, enumerating
/// by size then lexicographically; `X` is the earlier of the two.
pub fn find_collision(plan: &QueryPlan, d: usize, cap: WorkCap) -> Result<Option<(MarkedSet, MarkedSet)>> {
    let required = subset_count(plan.n(), d);
    cap.check(required)?;
    let table = ColumnTable::new(plan.columns(), plan.f());
    let mut seen: HashMap<Vec<u64>, Vec<usize>> = HashMap::with_capacity(required as usize);
    for k in 0..=d.min(plan.n()) {
        let hit = table.for_each_subset(k, |subset, acc| match seen.get(acc) {
            Some(prev) => ControlFlow::Break((MarkedSet::from_zero_based(prev), MarkedSet::from_zero_based(subset))),
            None => {
                seen.insert(acc.to_vec(), subset.to_vec());
                ControlFlow::Continue(())
            }
        });
        if let ControlFlow::Break(pair) = hit {
            return Ok(Some(pair));
        }
    }
    Ok(None)
}

/// Whether distinct sets of at most `d` items always get distinct answers.
pub fn verify_separating(plan: &QueryPlan, d: usize, cap: WorkCap) -> Result<bool> {
    Ok(find_collision(plan, d, cap)?.is_none())
}

/// A nonzero `x` of weight at most `w` in the kernel of the plan matrix,
/// found by direct enumeration; `None` certifies there is none.
pub fn min_weight_kernel_violation(plan: &QueryPlan, w: usize, cap: WorkCap) -> Result<Option<MarkedSet>> {
    cap.check(subset_count(plan.n(), w) - 1)?;
    let table = ColumnTable::new(plan.columns(), plan.f());
    for k in 1..=w.min(plan.n()) {
        let hit = table.for_each_subset(k, |subset, acc| {
            if acc.iter().all(|&word| word == 0) {
                ControlFlow::Break(MarkedSet::from_zero_based(subset))
            } else {
                ControlFlow::Continue(())
            }
        });
        if let ControlFlow::Break(x) = hit {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Checks the odd power-sum witness over every nonempty subset of the
/// nonzero field elements. Only degrees up to 4 are accepted.
pub fn verify_lemma21(field: &FieldSpec) -> Result<bool> {
    if field.degree() > 4 {
        return Err(Error::InvalidParameters(format!(
            "exhaustive power-sum check needs m <= 4, got {}",
            field.degree()
        )));
    }
    let elements: Vec<FieldElement> = field.nonzero_elements().collect();
    let subsets = 1u32 << elements.len();
    let mut subset = Vec::with_capacity(elements.len());
    for mask in 1..subsets {
        subset.clear();
        subset.extend(elements.iter().enumerate().filter(|(i, _)| (mask >> i) & 1 == 1).map(|(_, &x)| x));
        let k = match power_sum_witness(field, &subset) {
            Ok(k) => k,
            Err(_) => return Ok(false),
        };
        if k % 2 == 0 || k as usize > subset.len() || power_sum(field, &subset, k).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least `f` with `2^f >= sum_{i <= d} C(n, i)`.
pub fn entropy_lower_bound(n: usize, d: usize) -> u64 {
    let mut total = BigUint::from(0u32);
    let mut term = BigUint::from(1u32);
    for i in 0..=d.min(n) {
        if i > 0 {
            term = term * BigUint::from(n - i + 1) / BigUint::from(i);
        }
        total += &term;
    }
    (total - 1u32).bits()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub d: usize,
    pub lower: u64,
    pub constructed: u64,
    pub gap: i64,
}

impl BoundsReport {
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:>8} {:>4} {:>6} {:>12} {:>4}", "n", "d", "lower", "constructed", "gap");
        let _ = writeln!(out, "{:>8} {:>4} {:>6} {:>12} {:>4}", self.n, self.d, self.lower, self.constructed, self.gap);
        out
    }
}

/// Lower bound against the constructed plan size. With `d = 0` no query is needed.
pub fn bounds_report(n: usize, d: usize) -> Result<BoundsReport> {
    let lower = entropy_lower_bound(n, d);
    let constructed = if d == 0 { 0 } else { build_query_plan(n, d)?.f() as u64 };
    Ok(BoundsReport { n, d, lower, constructed, gap: constructed as i64 - lower as i64 })
}

/// `f` uniformly random query sets over `[n]`.
///
/// Bits come from ChaCha8 seeded with `seed_from_u64(seed)`: rows in order,
/// one `next_u64` per 64 columns, column `j` at bit `j % 64`.
pub fn random_plan(n: usize, d: usize, f: usize, seed: u64) -> Result<QueryPlan> {
    if f == 0 {
        return Err(Error::InvalidParameters("a random plan needs at least one query".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameters("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = n.div_ceil(64);
    let rows = (0..f).map(|_| BitVector::from_words(n, (0..words).map(|_| rng.next_u64()).collect())).collect();
    QueryPlan::from_matrix(n, d, BitMatrix::from_rows(n, rows)?)
}

#[derive(Clone, Debug)]
pub struct BaselineConfig {
    pub trials_per_f: usize,
    /// Largest `f` tried; defaults to `max(n, lower bound)`.
    pub max_f: Option<usize>,
    pub work_cap: WorkCap,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig { trials_per_f: 50, max_f: None, work_cap: WorkCap::DEFAULT }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaselineStep {
    pub f: usize,
    pub attempts: usize,
    pub successes: usize,
    pub success_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaselineReport {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub trials_per_f: usize,
    pub lower: u64,
    pub f_found: Option<usize>,
    pub total_attempts: usize,
    pub steps: Vec<BaselineStep>,
}

impl BaselineReport {
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:>5} {:>9} {:>10} {:>9}", "f", "attempts", "successes", "fraction");
        for s in &self.steps {
            let _ = writeln!(out, "{:>5} {:>9} {:>10} {:>9.3}", s.f, s.attempts, s.successes, s.success_fraction);
        }
        match self.f_found {
            Some(f) => {
                let _ = writeln!(out, "f_found = {f} (lower bound {})", self.lower);
            }
            None => {
                let _ = writeln!(out, "no separating random plan found (lower bound {})", self.lower);
            }
        }
        out
    }
}

/// Scans `f` upward from the entropy bound, drawing `trials_per_f` random
/// plans at each `f`, until some draw separates.
///
/// Plan seeds are drawn in order from ChaCha8 seeded with `seed`.
pub fn baseline_search(n: usize, d: usize, seed: u64, config: &BaselineConfig) -> Result<BaselineReport> {
    if n == 0 {
        return Err(Error::InvalidParameters("n must be at least 1".into()));
    }
    let lower = entropy_lower_bound(n, d);
    let start = (lower as usize).max(1);
    let max_f = config.max_f.unwrap_or(n.max(start));
    let per_attempt = subset_count(n, d);
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut spent: u128 = 0;
    let mut steps = Vec::new();
    let mut total_attempts = 0;
    let mut f_found = None;

    for f in start..=max_f {
        let mut successes = 0;
        for _ in 0..config.trials_per_f {
            spent = spent.saturating_add(per_attempt);
            config.work_cap.check(spent)?;
            let plan = random_plan(n, d, f, seeds.next_u64())?;
            if verify_separating(&plan, d, WorkCap(u128::MAX))? {
                successes += 1;
            }
        }
        total_attempts += config.trials_per_f;
        let success_fraction =
            if config.trials_per_f == 0 { 0.0 } else { successes as f64 / config.trials_per_f as f64 };
        steps.push(BaselineStep { f, attempts: config.trials_per_f, successes, success_fraction });
        if successes > 0 {
            f_found = Some(f);
            break;
        }
    }

    Ok(BaselineReport { n, d, seed, trials_per_f: config.trials_per_f, lower, f_found, total_attempts, steps })
}
