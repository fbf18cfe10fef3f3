//! Approximate (k,h)-core decomposition, straightforward variant.
//!
//! Every node keeps, per distance level i, the members of its distance-i
//! neighborhood whose rank clears a per-node threshold k[v,i]; the threshold
//! rises exactly as far as needed to keep the sample within the budget.
//! Samples are rebuilt from scratch for every node a deletion can affect.
//! This variant exists as the reference the incrementally maintained one is
//! checked against, so it favors clarity over speed and implements no
//! heuristics.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::exact_decomposition::CoreMap;
use crate::graph_core::{AliveMask, Graph};
use crate::rank_sketch::{sample_ranks, RankAssignment, RunConfig, RANK_CAP};
use crate::rank_sketch::scaled_estimate;
use crate::Real;

/// Per-level samples, thresholds, and reach estimates of one run.
#[derive(Debug, Clone)]
pub struct NaiveState<S: Real> {
    h: usize,
    budget: S,
    /// Largest sample size that fits the budget.
    floor_budget: usize,
    ranks: RankAssignment,
    alive: AliveMask,
    /// Sample member ids per (level, node), sorted ascending; slot i*n+v.
    b: Vec<Vec<u32>>,
    /// Rank threshold per (level, node).
    k: Vec<u32>,
    /// Reach estimate per node at level h.
    d: Vec<S>,
}

impl<S: Real> NaiveState<S> {
    /// Builds all levels bottom-up and seeds every reach estimate.
    pub fn new(g: &Graph, h: usize, budget: S, ranks: RankAssignment) -> NaiveState<S> {
        assert!(h >= 1, "h must be at least 1");
        assert_eq!(ranks.len(), g.node_count(), "one rank per node");
        let n = g.node_count();
        let mut state = NaiveState {
            h,
            budget,
            floor_budget: budget.floor().to_usize().expect("budget fits usize"),
            ranks,
            alive: AliveMask::new(n),
            b: vec![Vec::new(); n * (h + 1)],
            k: vec![0; n * (h + 1)],
            d: vec![S::zero(); n],
        };
        for v in 0..n as u32 {
            state.b[v as usize] = vec![v];
        }
        for i in 1..=h {
            for v in 0..n as u32 {
                compute_naive(&mut state, g, v, i);
            }
        }
        for v in 0..n as u32 {
            state.refresh_estimate(v);
        }
        state
    }

    fn slot(&self, v: u32, i: usize) -> usize {
        i * self.alive.len() + v as usize
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn budget(&self) -> S {
        self.budget
    }

    pub fn ranks(&self) -> &RankAssignment {
        &self.ranks
    }

    pub fn alive(&self) -> &AliveMask {
        &self.alive
    }

    /// Sample member ids of node `v` at level `i`, sorted ascending.
    pub fn sample(&self, v: u32, i: usize) -> &[u32] {
        &self.b[self.slot(v, i)]
    }

    /// Rank threshold of node `v` at level `i`.
    pub fn threshold(&self, v: u32, i: usize) -> u32 {
        self.k[self.slot(v, i)]
    }

    /// Current reach estimate of node `v`.
    pub fn estimate(&self, v: u32) -> S {
        self.d[v as usize]
    }

    fn refresh_estimate(&mut self, v: u32) -> bool {
        let slot = self.slot(v, self.h);
        let sample = &self.b[slot];
        let vr = self.ranks.rank(v);
        let others = sample.len() - usize::from(vr >= self.k[slot]);
        let fresh = scaled_estimate(others, self.k[slot], self.budget);
        let changed = fresh != self.d[v as usize];
        self.d[v as usize] = fresh;
        changed
    }
}

/// Rebuilds the level-`i` sample of `v` from its neighbors' level-`i-1`
/// samples. Returns whether the sample or its threshold changed.
///
/// The candidate set is `v` plus the union of alive neighbors' samples; the
/// threshold starts at the largest neighbor threshold and, when the
/// candidate set is too large, rises past the rank of its
/// (floor(M)+1)-st highest-ranked member, which always suffices.
pub fn compute_naive<S: Real>(state: &mut NaiveState<S>, g: &Graph, v: u32, i: usize) -> bool {
    debug_assert!(i >= 1 && i <= state.h, "level out of range");
    debug_assert!(state.alive.is_alive(v), "computing a deleted node");

    let mut candidates: Vec<u32> = vec![v];
    let mut k = 0u32;
    for &w in g.neighbors(v) {
        if state.alive.is_alive(w) {
            let ws = state.slot(w, i - 1);
            candidates.extend_from_slice(&state.b[ws]);
            k = k.max(state.k[ws]);
        }
    }
    candidates.sort_unstable();
    candidates.dedup();

    if candidates.len() > state.floor_budget {
        // Rank of the (floor(M)+1)-st highest-ranked candidate: the largest
        // r whose suffix count still exceeds the budget floor.
        let mut hist = [0usize; RANK_CAP as usize + 1];
        for &u in &candidates {
            hist[state.ranks.rank(u) as usize] += 1;
        }
        let mut suffix = 0usize;
        let mut cut = 0u32;
        for r in (0..=RANK_CAP).rev() {
            suffix += hist[r as usize];
            if suffix >= state.floor_budget + 1 {
                cut = r;
                break;
            }
        }
        k = k.max(cut + 1);
    }
    candidates.retain(|&u| state.ranks.rank(u) >= k);
    debug_assert!(
        candidates.len() <= state.floor_budget,
        "one threshold bump keeps the sample within budget"
    );

    let slot = state.slot(v, i);
    let changed = state.k[slot] != k || state.b[slot] != candidates;
    state.k[slot] = k;
    state.b[slot] = candidates;
    changed
}

/// Deletes `u` and rebuilds every sample its removal can reach, level by
/// level. Returns the nodes whose selection key (estimate or top-level
/// threshold) changed.
///
/// The level-i frontier is u's alive neighbors plus the neighbors of every
/// node whose level-(i-1) sample changed; nodes outside it cannot have
/// changed at level i.
pub fn update_naive<S: Real>(state: &mut NaiveState<S>, g: &Graph, u: u32) -> Vec<u32> {
    state.alive.kill(u);
    for i in 0..=state.h {
        let slot = state.slot(u, i);
        state.b[slot].clear();
    }

    let h = state.h;
    let mut frontier: Vec<u32> = Vec::new();
    let mut refreshed: Vec<u32> = Vec::new();
    for i in 1..=h {
        frontier.extend(g.neighbors(u).iter().copied());
        frontier.retain(|&v| state.alive.is_alive(v));
        frontier.sort_unstable();
        frontier.dedup();

        let mut next: Vec<u32> = Vec::new();
        for &v in &frontier {
            let old_k = state.k[state.slot(v, i)];
            if compute_naive(state, g, v, i) {
                next.extend(g.neighbors(v).iter().copied());
            }
            if i == h {
                let d_changed = state.refresh_estimate(v);
                if d_changed || state.k[state.slot(v, h)] != old_k {
                    refreshed.push(v);
                }
            }
        }
        frontier = next;
    }
    refreshed
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct SelectKey<S> {
    d: S,
    k: u32,
    v: u32,
}

impl<S: Real> Eq for SelectKey<S> {}

impl<S: Real> Ord for SelectKey<S> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.d
            .partial_cmp(&other.d)
            .expect("estimates are finite")
            .then(self.k.cmp(&other.k))
            .then(self.v.cmp(&other.v))
    }
}

impl<S: Real> PartialOrd for SelectKey<S> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Approximate core decomposition that rebuilds affected samples from
/// scratch after each deletion.
///
/// Ties on the estimate break toward the smaller threshold, then the
/// smaller id. The heuristic toggles of the config are ignored; they only
/// apply to the incrementally maintained variant.
pub fn core_naive<S: Real>(g: &Graph, config: &RunConfig<S>) -> CoreMap<S> {
    assert_eq!(
        config.node_count(),
        g.node_count(),
        "config was built for a different graph"
    );
    let n = g.node_count();
    let mut map = CoreMap::with_capacity(n);
    let ranks = sample_ranks(n, config.seed());
    let mut state = NaiveState::new(g, config.h(), config.budget(), ranks);
    let mut heap: BinaryHeap<Reverse<SelectKey<S>>> = BinaryHeap::with_capacity(n);
    for v in 0..n as u32 {
        heap.push(Reverse(SelectKey {
            d: state.estimate(v),
            k: state.threshold(v, config.h()),
            v,
        }));
    }

    let mut current = S::zero();
    while state.alive().remaining() > 0 {
        let Reverse(key) = heap.pop().expect("heap holds every alive node");
        // Lazy deletion: stale entries carry an outdated estimate or
        // threshold.
        if !state.alive().is_alive(key.v)
            || key.d != state.estimate(key.v)
            || key.k != state.threshold(key.v, config.h())
        {
            continue;
        }
        current = current.max(key.d);
        map.record(key.v, current);
        for v in update_naive(&mut state, g, key.v) {
            heap.push(Reverse(SelectKey {
                d: state.estimate(v),
                k: state.threshold(v, config.h()),
                v,
            }));
        }
    }
    map
}
