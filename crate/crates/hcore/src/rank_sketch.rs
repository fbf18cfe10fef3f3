//! Geometric rank sampling and the bounded-sample reach estimator.
//!
//! Every node draws an integer rank r with P(r >= k) = 2^-k. A neighborhood
//! whose size exceeds the sample budget M is represented only by its
//! highest-ranked members; the count of survivors above a rank threshold k,
//! scaled by 2^k, estimates the true size. The budget is chosen so that with
//! probability at least 1 - delta every estimate in a run of n nodes stays
//! within a factor 1 +/- epsilon.

use thiserror::Error;

use crate::{cast, Real};

/// Largest rank a node can draw. P(rank = 64) = 2^-64.
pub const RANK_CAP: u32 = 64;

/// Invalid decomposition parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("graph must contain at least one node")]
    EmptyGraph,
    #[error("h must be at least 1")]
    ZeroHorizon,
    #[error("delta must lie strictly between 0 and 1")]
    DeltaOutOfRange,
    #[error("epsilon must be positive")]
    EpsilonNotPositive,
    #[error("epsilon above 1/2 voids the accuracy guarantee")]
    EpsilonTooLarge,
}

/// Rank list passed to the estimator was empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("rank list is empty")]
pub struct EmptyRankList;

/// Confidence term C = ln(2n / delta) shared by every estimate of a run.
pub fn confidence_constant<S: Real>(n: usize, delta: S) -> Result<S, ConfigError> {
    if n == 0 {
        return Err(ConfigError::EmptyGraph);
    }
    if !(delta > S::zero() && delta < S::one()) {
        return Err(ConfigError::DeltaOutOfRange);
    }
    Ok((cast::<S, _>(2) * cast::<S, _>(n) / delta).ln())
}

/// Sample budget M = 1 + (4 (2 + epsilon) / epsilon^2) (C + ln 8).
///
/// The budget is kept as a real number; a neighborhood representation of
/// integer size s violates it exactly when s > floor(M). Requires epsilon
/// positive and a non-negative confidence term.
pub fn compute_budget<S: Real>(epsilon: S, confidence: S) -> Result<S, ConfigError> {
    if !(epsilon > S::zero()) {
        return Err(ConfigError::EpsilonNotPositive);
    }
    assert!(
        confidence >= S::zero(),
        "confidence term must be non-negative"
    );
    let four = cast::<S, _>(4);
    let two = cast::<S, _>(2);
    let eight = cast::<S, _>(8);
    let factor = four * (two + epsilon) / (epsilon * epsilon);
    Ok(S::one() + factor * (confidence + eight.ln()))
}

/// Parameters of one approximate decomposition run.
///
/// A config is bound to the node count it was built for; the drivers check
/// the match. The heuristic toggles do not change reported values, only how
/// much work the fast decomposition performs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig<S: Real> {
    n: usize,
    h: usize,
    epsilon: S,
    delta: S,
    seed: u64,
    confidence: S,
    budget: S,
    pub delayed_init: bool,
    pub early_stop: bool,
}

impl<S: Real> RunConfig<S> {
    /// Builds a config enforcing epsilon in (0, 1/2].
    pub fn new(n: usize, h: usize, epsilon: S, delta: S, seed: u64) -> Result<Self, ConfigError> {
        if epsilon > cast::<S, _>(0.5) {
            return Err(ConfigError::EpsilonTooLarge);
        }
        Self::with_unchecked_epsilon(n, h, epsilon, delta, seed)
    }

    /// Builds a config allowing any positive epsilon.
    ///
    /// Above 1/2 the accuracy guarantee no longer holds; large values are
    /// useful to force small budgets when exercising the truncation paths.
    pub fn with_unchecked_epsilon(
        n: usize,
        h: usize,
        epsilon: S,
        delta: S,
        seed: u64,
    ) -> Result<Self, ConfigError> {
        if h == 0 {
            return Err(ConfigError::ZeroHorizon);
        }
        let confidence = confidence_constant(n, delta)?;
        let budget = compute_budget(epsilon, confidence)?;
        Ok(RunConfig {
            n,
            h,
            epsilon,
            delta,
            seed,
            confidence,
            budget,
            delayed_init: true,
            early_stop: true,
        })
    }

    /// Returns the config with both heuristic toggles set.
    pub fn heuristics(mut self, delayed_init: bool, early_stop: bool) -> Self {
        self.delayed_init = delayed_init;
        self.early_stop = early_stop;
        self
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn epsilon(&self) -> S {
        self.epsilon
    }

    pub fn delta(&self) -> S {
        self.delta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn confidence(&self) -> S {
        self.confidence
    }

    pub fn budget(&self) -> S {
        self.budget
    }
}

/// Geometric rank of every node, drawn once per run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankAssignment {
    ranks: Vec<u8>,
}

impl RankAssignment {
    /// Wraps explicit ranks. Every rank must be at most [`RANK_CAP`].
    pub fn from_ranks(ranks: Vec<u8>) -> RankAssignment {
        assert!(
            ranks.iter().all(|&r| u32::from(r) <= RANK_CAP),
            "rank exceeds the cap"
        );
        RankAssignment { ranks }
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn rank(&self, v: u32) -> u32 {
        u32::from(self.ranks[v as usize])
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.ranks
    }
}

/// Finalizer of the splitmix64 generator.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws ranks for nodes `0..n` with P(rank >= k) = 2^-k.
///
/// Each rank is a pure function of (seed, node), so assignments are
/// reproducible and independent of evaluation order.
pub fn sample_ranks(n: usize, seed: u64) -> RankAssignment {
    let ranks = (0..n as u64)
        .map(|v| {
            let word = mix64(seed ^ (v + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            word.trailing_ones() as u8
        })
        .collect();
    RankAssignment { ranks }
}

/// Estimates the number of distinct elements behind a rank list.
///
/// `x[0]` is the rank of the element whose reach is being estimated and is
/// excluded from the survivor count. With k the smallest rank threshold
/// whose survivor count fits the budget, the estimate is the survivor count
/// scaled by 2^k, floored at budget * 2^(k-1) once any truncation happened.
pub fn est<S: Real>(x: &[u32], budget: S) -> Result<S, EmptyRankList> {
    if x.is_empty() {
        return Err(EmptyRankList);
    }
    assert!(budget >= S::one(), "budget must be at least 1");
    let mut hist = [0usize; RANK_CAP as usize + 1];
    for &r in x {
        assert!(r <= RANK_CAP, "rank exceeds the cap");
        hist[r as usize] += 1;
    }
    // suffix[k] counts ranks >= k; suffix[RANK_CAP + 1] = 0 guarantees a
    // threshold below the budget exists.
    let mut survivors = x.len();
    let mut k: u32 = 0;
    while cast::<S, _>(survivors) > budget {
        survivors -= hist[k as usize];
        k += 1;
    }
    let excluded_first = usize::from(x[0] >= k);
    Ok(scaled_estimate(survivors - excluded_first, k, budget))
}

/// Reach estimate for one node from its live sample.
///
/// `b` lists the member ids of the node's sample, `k` is the sample's rank
/// threshold. The node itself is excluded from the count when present.
pub fn estimate_node<S: Real>(b: &[u32], v: u32, k: u32, budget: S) -> S {
    let others = b.len() - usize::from(b.contains(&v));
    scaled_estimate(others, k, budget)
}

/// Shared scaling step: `others * 2^k`, floored at `budget * 2^(k-1)` when
/// the sample was truncated. Both approximate decompositions route every
/// estimate through here, so their reported values agree bit for bit.
pub(crate) fn scaled_estimate<S: Real>(others: usize, k: u32, budget: S) -> S {
    let two = cast::<S, _>(2);
    let scaled = cast::<S, _>(others) * two.powi(k as i32);
    if k == 0 {
        scaled
    } else {
        scaled.max(budget * two.powi(k as i32 - 1))
    }
}
