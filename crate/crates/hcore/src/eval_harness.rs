//! Accuracy and timing comparisons between the decompositions.
//!
//! A trial plan names a dataset, a horizon, accuracy parameters, seeds,
//! and algorithms; running it produces one report row per (algorithm,
//! seed) pair, each carrying the worst relative error against the exact
//! decomposition and the median wall-clock time over the requested
//! repeats. Rows serialize to CSV for downstream plotting.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::approx_fast::core_fast;
use crate::approx_naive::core_naive;
use crate::exact_decomposition::{exact_core_decomposition, CoreMap};
use crate::graph_core::Graph;
use crate::rank_sketch::{ConfigError, RunConfig};
use crate::Real;

/// Decomposition variants the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Exact,
    Naive,
    Fast,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Exact => "exact",
            Algorithm::Naive => "naive",
            Algorithm::Fast => "fast",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Algorithm::Exact),
            "naive" => Ok(Algorithm::Naive),
            "fast" => Ok(Algorithm::Fast),
            other => Err(format!(
                "unknown algorithm {other:?}, expected exact, naive, or fast"
            )),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum HarnessError {
    #[error("core maps cover different node sets ({left} vs {right} nodes)")]
    NodeSetMismatch { left: usize, right: usize },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Largest relative error of `approx` against `exact`, over the nodes
/// whose exact value is positive.
pub fn max_relative_error<S: Real>(
    exact: &CoreMap<S>,
    approx: &CoreMap<S>,
) -> Result<S, HarnessError> {
    if exact.node_count() != approx.node_count() {
        return Err(HarnessError::NodeSetMismatch {
            left: exact.node_count(),
            right: approx.node_count(),
        });
    }
    let mut worst = S::zero();
    for v in 0..exact.node_count() {
        let e = exact.values[v];
        if e > S::zero() {
            worst = worst.max((approx.values[v] - e).abs() / e);
        }
    }
    Ok(worst)
}

/// Number of nodes where exactly one of the two maps reports zero. The
/// relative guarantee forces agreement on zero-core nodes, so any
/// disagreement is a violation on its own.
pub fn zero_core_violations<S: Real>(
    exact: &CoreMap<S>,
    approx: &CoreMap<S>,
) -> Result<usize, HarnessError> {
    if exact.node_count() != approx.node_count() {
        return Err(HarnessError::NodeSetMismatch {
            left: exact.node_count(),
            right: approx.node_count(),
        });
    }
    Ok((0..exact.node_count())
        .filter(|&v| (exact.values[v] == S::zero()) != (approx.values[v] == S::zero()))
        .count())
}

/// One comparison to run: which algorithms, on which dataset, with which
/// parameters. Approximate algorithms run once per seed; `repeats`
/// controls how many timed executions back each reported duration.
#[derive(Debug, Clone)]
pub struct TrialPlan<'a, S> {
    pub dataset: &'a str,
    pub h: usize,
    pub epsilon: S,
    pub delta: S,
    pub seeds: &'a [u64],
    pub algorithms: &'a [Algorithm],
    pub repeats: usize,
    pub delayed_init: bool,
    pub early_stop: bool,
}

/// One result row of a trial run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport<S> {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub h: usize,
    pub epsilon: Option<S>,
    pub delta: Option<S>,
    pub seed: u64,
    pub max_rel_error: Option<S>,
    pub zero_core_violations: usize,
    pub seconds: f64,
    pub budget: Option<S>,
    pub exact_match: Option<bool>,
}

pub const CSV_HEADER: &str =
    "dataset,h,epsilon,delta,seed,algorithm,max_rel_error,seconds,M,exact_match";

impl<S: Real> TrialReport<S> {
    /// Serializes the row under [`CSV_HEADER`]; absent fields stay empty.
    pub fn csv_row(&self) -> String {
        fn opt<T: fmt::Display>(value: &Option<T>) -> String {
            value.as_ref().map(T::to_string).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{:.6},{},{}",
            self.dataset,
            self.h,
            opt(&self.epsilon),
            opt(&self.delta),
            self.seed,
            self.algorithm,
            opt(&self.max_rel_error),
            self.seconds,
            opt(&self.budget),
            opt(&self.exact_match),
        )
    }
}

fn median(mut seconds: Vec<f64>) -> f64 {
    seconds.sort_by(|a, b| a.partial_cmp(b).expect("durations are finite"));
    let mid = seconds.len() / 2;
    if seconds.len() % 2 == 1 {
        seconds[mid]
    } else {
        (seconds[mid - 1] + seconds[mid]) / 2.0
    }
}

fn timed<S: Real, F: FnMut() -> CoreMap<S>>(repeats: usize, mut run: F) -> (CoreMap<S>, f64) {
    let mut seconds = Vec::with_capacity(repeats);
    let mut first = None;
    for _ in 0..repeats {
        let start = Instant::now();
        let map = run();
        seconds.push(start.elapsed().as_secs_f64());
        first.get_or_insert(map);
    }
    (first.expect("at least one repeat"), median(seconds))
}

/// Runs every (algorithm, seed) combination of the plan on `g`.
///
/// The exact decomposition is always computed once as the accuracy
/// baseline; it appears as its own row (with empty accuracy fields and
/// seed 0) only when the plan lists it. Approximate rows keep the plan's
/// algorithm order, then seed order. Epsilon is deliberately not capped
/// here so that over-budget configurations can be measured.
pub fn run_trials<S: Real>(
    g: &Graph,
    plan: &TrialPlan<'_, S>,
) -> Result<Vec<TrialReport<S>>, HarnessError> {
    assert!(plan.repeats >= 1, "at least one timed repeat");
    let (exact, exact_seconds) =
        timed(plan.repeats, || exact_core_decomposition::<S>(g, plan.h));

    let mut reports = Vec::new();
    if plan.algorithms.contains(&Algorithm::Exact) {
        reports.push(TrialReport {
            dataset: plan.dataset.to_string(),
            algorithm: Algorithm::Exact,
            h: plan.h,
            epsilon: None,
            delta: None,
            seed: 0,
            max_rel_error: None,
            zero_core_violations: 0,
            seconds: exact_seconds,
            budget: None,
            exact_match: None,
        });
    }

    for &algorithm in plan.algorithms {
        if algorithm == Algorithm::Exact {
            continue;
        }
        for &seed in plan.seeds {
            let config =
                RunConfig::with_unchecked_epsilon(g.node_count(), plan.h, plan.epsilon, plan.delta, seed)?
                    .heuristics(plan.delayed_init, plan.early_stop);
            let (map, seconds) = timed(plan.repeats, || match algorithm {
                Algorithm::Naive => core_naive(g, &config),
                Algorithm::Fast => core_fast(g, &config),
                Algorithm::Exact => unreachable!(),
            });
            let error = max_relative_error(&exact, &map)?;
            let violations = zero_core_violations(&exact, &map)?;
            reports.push(TrialReport {
                dataset: plan.dataset.to_string(),
                algorithm,
                h: plan.h,
                epsilon: Some(plan.epsilon),
                delta: Some(plan.delta),
                seed,
                max_rel_error: Some(error),
                zero_core_violations: violations,
                seconds,
                budget: Some(config.budget()),
                exact_match: Some(error == S::zero() && violations == 0),
            });
        }
    }
    Ok(reports)
}
