//! Approximate (k,h)-core decomposition, incrementally maintained variant.
//!
//! Computes the same samples, thresholds, and estimates as the
//! straightforward variant, bit for bit, but never rebuilds a sample whose
//! inputs did not change. Three structures make that possible:
//!
//! * samples are counted lists: the entry for u in B[v,i] counts the
//!   neighbor samples contributing u, so losing one contributor is a
//!   decrement instead of a rebuild;
//! * every entry carries handles to the downstream entries it contributes
//!   to, so a removal knows exactly what to decrement next, level by level;
//! * per sample, m[v,i] counts the neighbors whose threshold equals
//!   k[v,i], and once none does, a candidate list D[v,i] holds the nodes
//!   that would re-enter if the threshold dropped by one. The threshold
//!   drops exactly when the sample, the candidates, and possibly v itself
//!   fit the budget together, and a from-scratch rebuild then realizes it.
//!
//! Deletions are processed in rounds, one per level. A round first applies
//! all removal records produced by the previous level (decrements through
//! the stored handles), then rebuilds or repairs the touched samples. The
//! records a round's removals produce seed the next round.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::exact_decomposition::CoreMap;
use crate::graph_core::{AliveMask, Graph};
use crate::rank_sketch::{sample_ranks, scaled_estimate, RankAssignment, RunConfig};
use crate::{cast, Real};

mod counted_list;

pub use counted_list::{delete_entries, merge_sorted, CountedList, Handle};

use counted_list::Decrement;

const NO_SLOT: u32 = u32::MAX;

/// Samples, thresholds, candidate lists, and bookkeeping of one run.
///
/// Per (node, level) the state holds the counted sample B, its threshold
/// k, the matching-neighbor count m, the candidate list D, and whether the
/// node itself sits in D. Nodes can trail at a lower level than h until
/// the driver needs their full estimate.
#[derive(Debug)]
pub struct FastState<S: Real> {
    h: usize,
    budget: S,
    floor_budget: usize,
    ranks: RankAssignment,
    alive: AliveMask,
    /// Counted sample per (level, node); slot i*n+v.
    b: Vec<CountedList>,
    /// Rank threshold per (level, node).
    k: Vec<u32>,
    /// Neighbors whose level-(i-1) threshold equals k[v,i].
    m: Vec<u32>,
    /// Candidates at rank k[v,i]-1, kept exactly while m[v,i] is zero.
    dlist: Vec<CountedList>,
    /// Whether v itself appears in D[v,i].
    self_in_d: Vec<bool>,
    /// Set when m[v,i] just hit zero and D[v,i] awaits its rebuild.
    d_stale: Vec<bool>,
    /// Highest level built per node.
    level_built: Vec<usize>,
    /// Reach estimate per node, taken at its built level.
    d: Vec<S>,
    /// Rebuild calls per (level, node), for the call-budget bound.
    compute_calls: Vec<u32>,
    /// Largest threshold any sample reached.
    k_peak: u32,
    /// Position of v in the adjacency of its j-th neighbor, per CSR slot.
    rev_pos: Vec<u32>,
    union_mark: Vec<u32>,
    union_handle: Vec<u32>,
    union_epoch: u32,
}

impl<S: Real> FastState<S> {
    /// Builds the state with every level computed.
    pub fn new(g: &Graph, h: usize, budget: S, ranks: RankAssignment) -> FastState<S> {
        FastState::with_levels(g, h, budget, ranks, h)
    }

    /// Builds levels `0..=init_levels` for every node; the rest are filled
    /// in on demand through [`advance_one`].
    pub(crate) fn with_levels(
        g: &Graph,
        h: usize,
        budget: S,
        ranks: RankAssignment,
        init_levels: usize,
    ) -> FastState<S> {
        assert!(h >= 1, "h must be at least 1");
        assert!((1..=h).contains(&init_levels));
        assert_eq!(ranks.len(), g.node_count(), "one rank per node");
        let n = g.node_count();
        let slots = n * (h + 1);

        let mut rev_pos = vec![0u32; g.neighbors_len()];
        for v in 0..n as u32 {
            for (j, &w) in g.neighbors(v).iter().enumerate() {
                let pos = g
                    .neighbors(w)
                    .binary_search(&v)
                    .expect("undirected adjacency is symmetric");
                rev_pos[g.adjacency_slot(v, j)] = pos as u32;
            }
        }

        let mut state = FastState {
            h,
            budget,
            floor_budget: budget.floor().to_usize().expect("budget fits usize"),
            ranks,
            alive: AliveMask::new(n),
            b: vec![CountedList::new(); slots],
            k: vec![0; slots],
            m: vec![0; slots],
            dlist: vec![CountedList::new(); slots],
            self_in_d: vec![false; slots],
            d_stale: vec![false; slots],
            level_built: vec![0; n],
            d: vec![S::zero(); n],
            compute_calls: vec![0; slots],
            k_peak: 0,
            rev_pos,
            union_mark: vec![0; n],
            union_handle: vec![0; n],
            union_epoch: 0,
        };

        // Level 0 is the node itself; its entry carries the slots feeding
        // the level-1 lists of its neighbors.
        for v in 0..n as u32 {
            let mut list = CountedList::singleton(v, state.ranks.rank(v));
            list.set_slots(
                list.head_handle(),
                vec![NO_SLOT; 2 * g.degree(v)].into_boxed_slice(),
            );
            state.b[v as usize] = list;
        }
        for i in 1..=init_levels {
            for v in 0..n as u32 {
                compute_fast(&mut state, g, v, i);
            }
            for v in 0..n {
                state.level_built[v] = i;
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

    /// Sample entries of node `v` at level `i` as (node, rank, count), in
    /// rank-descending, id-ascending order.
    pub fn sample_entries(&self, v: u32, i: usize) -> Vec<(u32, u32, u32)> {
        self.b[self.slot(v, i)].iter().collect()
    }

    /// Rank threshold of node `v` at level `i`.
    pub fn threshold(&self, v: u32, i: usize) -> u32 {
        self.k[self.slot(v, i)]
    }

    /// Number of alive neighbors whose level-(i-1) threshold equals the
    /// level-i threshold of `v`.
    pub fn threshold_matches(&self, v: u32, i: usize) -> u32 {
        self.m[self.slot(v, i)]
    }

    /// Candidate entries of node `v` at level `i` as (node, count), in
    /// encounter order.
    pub fn candidate_entries(&self, v: u32, i: usize) -> Vec<(u32, u32)> {
        self.dlist[self.slot(v, i)]
            .iter()
            .map(|(node, _, count)| (node, count))
            .collect()
    }

    /// Whether `v` appears in its own candidate list at level `i`.
    pub fn self_listed(&self, v: u32, i: usize) -> bool {
        self.self_in_d[self.slot(v, i)]
    }

    /// Current reach estimate of node `v`, taken at its built level.
    pub fn estimate(&self, v: u32) -> S {
        self.d[v as usize]
    }

    /// Highest level built for node `v`.
    pub fn level(&self, v: u32) -> usize {
        self.level_built[v as usize]
    }

    pub fn compute_call_count(&self, v: u32, i: usize) -> u32 {
        self.compute_calls[self.slot(v, i)]
    }

    /// Largest threshold any sample reached so far.
    pub fn k_peak(&self) -> u32 {
        self.k_peak
    }

    fn refresh_estimate(&mut self, v: u32) -> bool {
        let lvl = self.level_built[v as usize];
        let slot = self.slot(v, lvl);
        let others =
            self.b[slot].len() - usize::from(self.ranks.rank(v) >= self.k[slot]);
        let fresh = scaled_estimate(others, self.k[slot], self.budget);
        let changed = fresh != self.d[v as usize];
        self.d[v as usize] = fresh;
        changed
    }

    /// Rebuilds D[v,i] from current sources and installs its handles.
    /// Shares the rebuild-call budget with [`compute_fast`].
    fn refresh_candidates(&mut self, g: &Graph, v: u32, i: usize) {
        let slot = self.slot(v, i);
        debug_assert_eq!(self.m[slot], 0, "candidates exist only without matches");
        debug_assert!(self.dlist[slot].is_empty(), "a stale candidate list is empty");
        self.d_stale[slot] = false;
        if self.k[slot] == 0 {
            return;
        }
        self.compute_calls[slot] += 1;
        let threshold = self.k[slot];
        let (dl, self_in) = self.build_candidates(g, v, i, threshold);
        self.dlist[slot] = dl;
        self.self_in_d[slot] = self_in;
    }

    /// Counted union of the rank-(threshold-1) members of the alive
    /// neighbors' level-(i-1) samples, with candidate handles installed
    /// into the contributing entries. Returns the list and whether `v`
    /// itself appears in it.
    fn build_candidates(
        &mut self,
        g: &Graph,
        v: u32,
        i: usize,
        threshold: u32,
    ) -> (CountedList, bool) {
        debug_assert!(threshold >= 1);
        let want = threshold - 1;
        self.union_epoch += 1;
        let epoch = self.union_epoch;
        let mut dl = CountedList::new();
        for (j, &w) in g.neighbors(v).iter().enumerate() {
            if !self.alive.is_alive(w) {
                continue;
            }
            let d_slot_idx = (2 * self.rev_pos[g.adjacency_slot(v, j)] + 1) as usize;
            let src_slot = self.slot(w, i - 1);
            let src = &mut self.b[src_slot];
            let mut cursor = src.head_handle();
            while !cursor.is_null() && src.rank_at(cursor) > want {
                cursor = src.next_handle(cursor);
            }
            while !cursor.is_null() && src.rank_at(cursor) == want {
                let node = src.node_at(cursor);
                let handle = if self.union_mark[node as usize] == epoch {
                    let h = Handle(self.union_handle[node as usize]);
                    dl.increment(h);
                    h
                } else {
                    self.union_mark[node as usize] = epoch;
                    let h = dl.push_back_unordered(node, want, 1);
                    self.union_handle[node as usize] = h.0;
                    h
                };
                src.slots_mut(cursor)[d_slot_idx] = handle.0;
                cursor = src.next_handle(cursor);
            }
        }
        let self_in = self.union_mark[v as usize] == epoch;
        (dl, self_in)
    }

    /// Whether a rebuild of (v, i) is allowed to fire: the threshold can
    /// only drop once no neighbor threshold pins it and the sample plus
    /// every re-entry candidate (including v itself when its rank
    /// qualifies and it is not already a candidate) fit the budget.
    fn rebuild_guard(&self, v: u32, i: usize) -> bool {
        let slot = self.slot(v, i);
        let threshold = self.k[slot];
        if threshold == 0 || self.m[slot] != 0 {
            return false;
        }
        let extra = usize::from(
            self.ranks.rank(v) == threshold - 1 && !self.self_in_d[slot],
        );
        self.b[slot].len() + self.dlist[slot].len() + extra <= self.floor_budget
    }
}

/// Rebuilds the level-`i` sample of `v` from its neighbors' level-`(i-1)`
/// samples, carrying surviving handle arrays over and installing handles
/// for everything new. Returns whether the sample or threshold changed.
pub fn compute_fast<S: Real>(state: &mut FastState<S>, g: &Graph, v: u32, i: usize) -> bool {
    debug_assert!(i >= 1 && i <= state.h, "level out of range");
    debug_assert!(state.alive.is_alive(v), "computing a deleted node");
    let slot = state.slot(v, i);
    state.compute_calls[slot] += 1;

    let old_k = state.k[slot];
    let mut old_b = std::mem::take(&mut state.b[slot]);

    let mut threshold = 0u32;
    for &w in g.neighbors(v) {
        if state.alive.is_alive(w) {
            threshold = threshold.max(state.k[state.slot(w, i - 1)]);
        }
    }

    // Accumulate the counted union of contributing prefixes, raising the
    // threshold past the (floor(M)+1)-st highest rank whenever the
    // accumulator overflows; everything in it has rank at least the
    // current threshold, so each raise strictly tightens.
    let mut acc = CountedList::singleton(v, state.ranks.rank(v));
    acc.truncate_below_rank(threshold);
    for &w in g.neighbors(v) {
        if !state.alive.is_alive(w) {
            continue;
        }
        let contrib = state.b[state.slot(w, i - 1)].contributions_at(threshold);
        acc = merge_sorted(&acc, &contrib);
        if acc.len() > state.floor_budget {
            let cut = acc.rank_at_index(state.floor_budget);
            debug_assert!(cut >= threshold);
            threshold = cut + 1;
            acc.truncate_below_rank(threshold);
        }
    }
    debug_assert!(acc.len() <= state.floor_budget);
    debug_assert!(
        old_b.is_empty() || threshold <= old_k,
        "thresholds never rise while a run peels"
    );
    state.k_peak = state.k_peak.max(threshold);

    let changed = threshold != old_k || !same_entries(&old_b, &acc);

    // Carry the slot arrays of surviving entries; the old sample is a
    // subset of the new one. Fresh entries get empty slot arrays now and
    // receive real ones below unless this is the last level.
    {
        let mut oc = old_b.head_handle();
        let mut nc = acc.head_handle();
        while !oc.is_null() {
            let node = old_b.node_at(oc);
            while acc.node_at(nc) != node {
                nc = acc.next_handle(nc);
            }
            acc.set_slots(nc, old_b.take_slots(oc));
            oc = old_b.next_handle(oc);
        }
    }
    if i < state.h {
        let width = 2 * g.degree(v);
        let mut nc = acc.head_handle();
        while !nc.is_null() {
            if acc.slots_mut(nc).is_empty() {
                acc.set_slots(nc, vec![NO_SLOT; width].into_boxed_slice());
            }
            nc = acc.next_handle(nc);
        }
    }
    state.b[slot] = acc;

    // Re-point the contributing entries of every source at their new
    // locations, and clear the handles into the candidate list being
    // replaced: only entries at rank old_k - 1 can hold one.
    let mut matches = 0u32;
    for (j, &w) in g.neighbors(v).iter().enumerate() {
        if !state.alive.is_alive(w) {
            continue;
        }
        let src_slot = state.slot(w, i - 1);
        if state.k[src_slot] == threshold {
            matches += 1;
        }
        let base = 2 * state.rev_pos[g.adjacency_slot(v, j)] as usize;
        let min_rank = if old_k >= 1 {
            threshold.min(old_k - 1)
        } else {
            threshold
        };
        let (src, fin) = two_lists(&mut state.b, src_slot, slot);
        let mut sc = src.head_handle();
        let mut fc = fin.head_handle();
        while !sc.is_null() && src.rank_at(sc) >= min_rank {
            let rank = src.rank_at(sc);
            if rank >= threshold {
                let node = src.node_at(sc);
                while fin.node_at(fc) != node {
                    fc = fin.next_handle(fc);
                }
                src.slots_mut(sc)[base] = fc.0;
            }
            if old_k >= 1 && rank == old_k - 1 {
                src.slots_mut(sc)[base + 1] = NO_SLOT;
            }
            sc = src.next_handle(sc);
        }
    }

    state.m[slot] = matches;
    state.d_stale[slot] = false;
    if threshold >= 1 && matches == 0 {
        let (dl, self_in) = state.build_candidates(g, v, i, threshold);
        state.dlist[slot] = dl;
        state.self_in_d[slot] = self_in;
    } else {
        state.dlist[slot] = CountedList::new();
        state.self_in_d[slot] = false;
    }
    state.k[slot] = threshold;
    changed
}

fn same_entries(a: &CountedList, b: &CountedList) -> bool {
    a.len() == b.len() && a.iter().eq(b.iter())
}

/// Mutable access to two distinct lists of the sample table.
fn two_lists(lists: &mut [CountedList], a: usize, b: usize) -> (&mut CountedList, &CountedList) {
    debug_assert_ne!(a, b);
    if a < b {
        let (lo, hi) = lists.split_at_mut(b);
        (&mut lo[a], &hi[0])
    } else {
        let (lo, hi) = lists.split_at_mut(a);
        (&mut hi[0], &lo[b])
    }
}

/// Counted union of the rank-`rank` members of the given lists, in
/// encounter order.
pub fn union_candidates(sources: &[&CountedList], rank: u32) -> CountedList {
    let mut out = CountedList::new();
    let mut seen: Vec<(u32, Handle)> = Vec::new();
    for src in sources {
        for (node, r, _) in src.iter() {
            if r != rank {
                continue;
            }
            match seen.iter().find(|(n, _)| *n == node) {
                Some(&(_, h)) => out.increment(h),
                None => {
                    let h = out.push_back_unordered(node, rank, 1);
                    seen.push((node, h));
                }
            }
        }
    }
    out
}

/// Deletes `u` and repairs every sample its removal reaches.
///
/// Round i first applies the removal records produced at level i-1
/// (decrementing through the stored handles), then walks the touched
/// samples: a candidate list whose matching-neighbor count just hit zero
/// is rebuilt eagerly, a sample whose guard passes is rebuilt (strictly
/// lowering its threshold, which propagates one matching-neighbor
/// decrement upward), and estimates are refreshed at each node's built
/// level. Returns the nodes whose selection key changed.
pub fn update_fast<S: Real>(state: &mut FastState<S>, g: &Graph, u: u32) -> Vec<u32> {
    let h = state.h;
    state.alive.kill(u);

    // The dying node leaves the matching-neighbor counts of its alive
    // neighbors at every built level.
    let mut touched: Vec<Vec<u32>> = vec![Vec::new(); h + 1];
    for &x in g.neighbors(u) {
        if !state.alive.is_alive(x) {
            continue;
        }
        for i in 1..=state.level_built[x as usize] {
            let sx = state.slot(x, i);
            if state.k[state.slot(u, i - 1)] == state.k[sx] {
                debug_assert!(state.m[sx] > 0);
                state.m[sx] -= 1;
                if state.m[sx] == 0 {
                    state.d_stale[sx] = true;
                }
                touched[i].push(x);
            }
        }
    }
    for i in 1..=state.level_built[u as usize] {
        let su = state.slot(u, i);
        state.dlist[su] = CountedList::new();
        state.self_in_d[su] = false;
    }

    let mut refreshed: Vec<u32> = Vec::new();
    // Removal records flowing into round i: (list owner, records removed
    // from the owner's level-(i-1) sample).
    let seed_slot = state.slot(u, 0);
    let mut pending: Vec<(u32, Vec<(u32, Box<[u32]>)>)> =
        vec![(u, state.b[seed_slot].take_records())];

    for i in 1..=h {
        // Phase one: apply every removal record through its handles.
        let mut removed: Vec<(u32, (u32, Box<[u32]>))> = Vec::new();
        let mut touched_now = std::mem::take(&mut touched[i]);
        for (owner, records) in &pending {
            for (j, &w) in g.neighbors(*owner).iter().enumerate() {
                if !state.alive.is_alive(w) || state.level_built[w as usize] < i {
                    continue;
                }
                let sw = state.slot(w, i);
                for (node, slots) in records {
                    let hb = slots[2 * j];
                    if hb != NO_SLOT {
                        match state.b[sw].decrement_take(Handle(hb)) {
                            Decrement::Kept => {}
                            Decrement::Removed { node: gone, slots } => {
                                debug_assert_eq!(gone, *node);
                                removed.push((w, (gone, slots)));
                            }
                        }
                        touched_now.push(w);
                    }
                    let hd = slots[2 * j + 1];
                    if hd != NO_SLOT {
                        if let Decrement::Removed { node: gone, .. } =
                            state.dlist[sw].decrement_take(Handle(hd))
                        {
                            if gone == w {
                                state.self_in_d[sw] = false;
                            }
                        }
                        touched_now.push(w);
                    }
                }
            }
        }
        touched_now.sort_unstable();
        touched_now.dedup();

        // Phase two: repair the touched samples against the now-final
        // level-(i-1) state.
        for &w in &touched_now {
            if !state.alive.is_alive(w) || state.level_built[w as usize] < i {
                continue;
            }
            let sw = state.slot(w, i);
            if state.d_stale[sw] {
                state.refresh_candidates(g, w, i);
            }
            if state.rebuild_guard(w, i) {
                let old_k = state.k[sw];
                compute_fast(state, g, w, i);
                debug_assert!(
                    state.k[sw] < old_k,
                    "a guarded rebuild strictly lowers the threshold"
                );
                if i < h {
                    for &y in g.neighbors(w) {
                        if !state.alive.is_alive(y) || state.level_built[y as usize] <= i {
                            continue;
                        }
                        let sy = state.slot(y, i + 1);
                        if state.k[sy] == old_k {
                            debug_assert!(state.m[sy] > 0);
                            state.m[sy] -= 1;
                            if state.m[sy] == 0 {
                                state.d_stale[sy] = true;
                            }
                            touched[i + 1].push(y);
                        }
                    }
                }
            }
            if i == state.level_built[w as usize] {
                let old_key_k = state.k[sw];
                let d_changed = state.refresh_estimate(w);
                if d_changed || state.k[sw] != old_key_k {
                    refreshed.push(w);
                }
            }
        }

        // Seed the next round: this round's removals, grouped by owner,
        // then the dying node's own level-i sample.
        if i < h {
            removed.sort_by_key(|(owner, _)| *owner);
            let mut next: Vec<(u32, Vec<(u32, Box<[u32]>)>)> = Vec::new();
            for (owner, record) in removed {
                match next.last_mut() {
                    Some((last, records)) if *last == owner => records.push(record),
                    _ => next.push((owner, vec![record])),
                }
            }
            if state.level_built[u as usize] >= i {
                let su = state.slot(u, i);
                let records = state.b[su].take_records();
                if !records.is_empty() {
                    next.push((u, records));
                }
            }
            pending = next;
        }
    }
    refreshed
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct SelectKey<S> {
    d: S,
    full: bool,
    k: u32,
    v: u32,
}

impl<S: Real> Eq for SelectKey<S> {}

impl<S: Real> Ord for SelectKey<S> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.d
            .partial_cmp(&other.d)
            .expect("estimates are finite")
            .then(self.full.cmp(&other.full))
            .then(self.k.cmp(&other.k))
            .then(self.v.cmp(&other.v))
    }
}

impl<S: Real> PartialOrd for SelectKey<S> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Rebuild-call counts of a finished run, for inspecting the per-sample
/// call budget.
#[derive(Debug, Clone)]
pub struct FastTrace {
    pub node_count: usize,
    pub h: usize,
    /// Calls per (level, node); slot i*n+v.
    pub compute_calls: Vec<u32>,
    /// Largest threshold any sample reached.
    pub k_peak: u32,
}

impl FastTrace {
    pub fn calls(&self, v: u32, i: usize) -> u32 {
        self.compute_calls[i * self.node_count + v as usize]
    }
}

/// Approximate core decomposition with incremental sample maintenance.
///
/// Reports exactly the values and deletion order of the straightforward
/// variant under the same config. With `delayed_init` set, levels above 1
/// are built per node only once the node nears selection; with
/// `early_stop` set, peeling ends as soon as the running value covers
/// every remaining node, which reports the remainder in id order.
pub fn core_fast<S: Real>(g: &Graph, config: &RunConfig<S>) -> CoreMap<S> {
    core_fast_traced(g, config).0
}

/// [`core_fast`] variant that also returns the rebuild-call trace.
pub fn core_fast_traced<S: Real>(g: &Graph, config: &RunConfig<S>) -> (CoreMap<S>, FastTrace) {
    assert_eq!(
        config.node_count(),
        g.node_count(),
        "config was built for a different graph"
    );
    let n = g.node_count();
    let h = config.h();
    let mut map = CoreMap::with_capacity(n);
    let ranks = sample_ranks(n, config.seed());
    let init_levels = if config.delayed_init { 1 } else { h };
    let mut state = FastState::with_levels(g, h, config.budget(), ranks, init_levels);

    let mut heap: BinaryHeap<Reverse<SelectKey<S>>> = BinaryHeap::with_capacity(n);
    let push_key = |heap: &mut BinaryHeap<Reverse<SelectKey<S>>>, state: &FastState<S>, v: u32| {
        let lvl = state.level_built[v as usize];
        heap.push(Reverse(SelectKey {
            d: state.estimate(v),
            full: lvl == h,
            k: state.threshold(v, lvl),
            v,
        }));
    };
    for v in 0..n as u32 {
        push_key(&mut heap, &state, v);
    }

    let mut current = S::zero();
    while map.deletion_order.len() < n {
        let Reverse(key) = heap.pop().expect("heap covers every alive node");
        if !state.alive.is_alive(key.v) {
            continue;
        }
        let lvl = state.level_built[key.v as usize];
        if !key.full {
            // A deferred key is a lower bound for the node's full key, so
            // popping one never outruns a pending deletion; advance the
            // node one level and requeue it.
            if lvl < h {
                advance_one(&mut state, g, key.v);
                push_key(&mut heap, &state, key.v);
            }
            continue;
        }
        if lvl < h || key.d != state.estimate(key.v) || key.k != state.threshold(key.v, h) {
            continue;
        }
        current = current.max(key.d);
        map.record(key.v, current);
        for w in update_fast(&mut state, g, key.v) {
            push_key(&mut heap, &state, w);
        }
        let remaining = state.alive.remaining();
        if config.early_stop && remaining > 0 && current >= cast(remaining - 1) {
            // Every remaining node's value can only be clamped to the
            // running maximum; report them in id order and stop.
            for w in state.alive.iter_alive().collect::<Vec<_>>() {
                map.record(w, current);
            }
            break;
        }
    }

    let trace = FastTrace {
        node_count: n,
        h,
        compute_calls: state.compute_calls.clone(),
        k_peak: state.k_peak,
    };
    (map, trace)
}

/// Builds one more level for `v`, first raising its alive neighbors to the
/// level below; estimates of every raised node are refreshed.
fn advance_one<S: Real>(state: &mut FastState<S>, g: &Graph, v: u32) {
    let next = state.level_built[v as usize] + 1;
    debug_assert!(next <= state.h);
    ensure_level(state, g, v, next);
    state.refresh_estimate(v);
}

fn ensure_level<S: Real>(state: &mut FastState<S>, g: &Graph, v: u32, lvl: usize) {
    if state.level_built[v as usize] >= lvl {
        return;
    }
    ensure_level(state, g, v, lvl - 1);
    for &w in g.neighbors(v) {
        if state.alive.is_alive(w) {
            ensure_level(state, g, w, lvl - 1);
        }
    }
    compute_fast(state, g, v, lvl);
    state.level_built[v as usize] = lvl;
    state.refresh_estimate(v);
}
