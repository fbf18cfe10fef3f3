//! Shared oracles, generators, and drivers for the integration suites.
//!
//! The oracles are deliberately independent of the library internals:
//! textbook bucket peeling, brute-force fixpoint stripping over a fresh
//! breadth-first search, and a literal-definition estimator. The golden
//! reconstruction rebuilds every sample, threshold, match counter, and
//! candidate list from scratch so differential tests can compare the
//! incrementally maintained state against first principles.

#![allow(dead_code)]

use std::collections::BTreeMap;

use hcore::{
    sample_ranks, update_fast, update_naive, CoreMap, FastState, Graph, NaiveState, RunConfig64,
};
use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;

/// Classical core numbers via bucket peeling in degree order.
///
/// Runs in linear time with the bin-sorted vertex array; `core[v]` ends as
/// the largest k such that v survives in the k-core.
pub fn bucket_kcore(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut core: Vec<usize> = (0..n).map(|v| g.degree(v as u32)).collect();
    if n == 0 {
        return core;
    }
    let max_deg = core.iter().copied().max().unwrap();
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &core {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let width = *b;
        *b = start;
        start += width;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0u32; n];
    for v in 0..n {
        pos[v] = bin[core[v]];
        vert[pos[v]] = v as u32;
        bin[core[v]] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;
    for idx in 0..n {
        let v = vert[idx] as usize;
        for &w in g.neighbors(v as u32) {
            let w = w as usize;
            if core[w] > core[v] {
                let dw = core[w];
                let pw = pos[w];
                let pfirst = bin[dw];
                let first = vert[pfirst] as usize;
                if first != w {
                    vert[pw] = first as u32;
                    vert[pfirst] = w as u32;
                    pos[w] = pfirst;
                    pos[first] = pw;
                }
                bin[dw] += 1;
                core[w] -= 1;
            }
        }
    }
    core
}

/// Number of nodes other than `v` reachable from `v` within `h` hops on
/// the subgraph induced by `alive`.
pub fn reach_count(g: &Graph, alive: &[bool], v: u32, h: usize) -> usize {
    let mut seen = vec![false; g.node_count()];
    seen[v as usize] = true;
    let mut frontier = vec![v];
    let mut found = 0usize;
    for _ in 0..h {
        let mut next = Vec::new();
        for &x in &frontier {
            for &w in g.neighbors(x) {
                let wi = w as usize;
                if alive[wi] && !seen[wi] {
                    seen[wi] = true;
                    found += 1;
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    found
}

/// Nodes within `h` hops of `v` on the `alive`-induced subgraph, including
/// `v` itself, sorted ascending.
pub fn nodes_within(g: &Graph, alive: &[bool], v: u32, h: usize) -> Vec<u32> {
    let mut seen = vec![false; g.node_count()];
    seen[v as usize] = true;
    let mut out = vec![v];
    let mut frontier = vec![v];
    for _ in 0..h {
        let mut next = Vec::new();
        for &x in &frontier {
            for &w in g.neighbors(x) {
                let wi = w as usize;
                if alive[wi] && !seen[wi] {
                    seen[wi] = true;
                    out.push(w);
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    out.sort_unstable();
    out
}

/// Distance-h core numbers by fixpoint stripping, one k at a time.
///
/// For each k the survivors of level k-1 are repeatedly scanned and every
/// node reaching fewer than k others inside the current survivor set is
/// dropped, until a pass removes nothing. Quadratic and only for small
/// inputs, but each step is the bare definition.
pub fn brute_force_core_map(g: &Graph, h: usize) -> Vec<usize> {
    let n = g.node_count();
    let mut core = vec![0usize; n];
    let mut candidates = vec![true; n];
    let mut k = 1usize;
    loop {
        let mut alive = candidates.clone();
        loop {
            let mut removed_any = false;
            for v in 0..n {
                if alive[v] && reach_count(g, &alive, v as u32, h) < k {
                    alive[v] = false;
                    removed_any = true;
                }
            }
            if !removed_any {
                break;
            }
        }
        if !alive.iter().any(|&a| a) {
            return core;
        }
        for v in 0..n {
            if alive[v] {
                core[v] = k;
            }
        }
        candidates = alive;
        k += 1;
    }
}

/// Checks that every value in `core` is witnessed by an induced subgraph:
/// for each k, every node with value >= k reaches at least k others within
/// `h` hops among the nodes with value >= k.
pub fn induced_core_check(g: &Graph, h: usize, core: &[usize]) -> bool {
    let n = g.node_count();
    let max_k = core.iter().copied().max().unwrap_or(0);
    for k in 1..=max_k {
        let alive: Vec<bool> = (0..n).map(|v| core[v] >= k).collect();
        for v in 0..n {
            if alive[v] && reach_count(g, &alive, v as u32, h) < k {
                return false;
            }
        }
    }
    true
}

/// Literal-definition reach estimator over a rank list whose first element
/// is the querying node's own rank.
///
/// Scans for the smallest threshold whose survivor count fits the budget,
/// then scales the survivors excluding the node itself, clamped from below
/// by the budget at the previous threshold.
pub fn est_reference(x: &[u32], budget: f64) -> f64 {
    assert!(!x.is_empty());
    let mut k = 0u32;
    while x.iter().filter(|&&r| r >= k).count() as f64 > budget {
        k += 1;
    }
    let survivors = x.iter().filter(|&&r| r >= k).count();
    let others = (survivors - usize::from(x[0] >= k)) as f64;
    let scaled = others * 2f64.powi(k as i32);
    if k == 0 {
        scaled
    } else {
        scaled.max(budget * 2f64.powi(k as i32 - 1))
    }
}

/// From-scratch reconstruction of one node's sampler state at one level.
pub struct GoldenSample {
    /// Rank threshold: the smallest admissible filter level.
    pub k: u32,
    /// Sample as (node, count) pairs, id-ascending. The count is one for
    /// the node itself when it passes the filter, plus one per alive
    /// neighbor whose previous-level sample contains the node.
    pub b: Vec<(u32, u32)>,
    /// Alive neighbors whose previous-level threshold equals `k`.
    pub m: u32,
    /// Candidates at rank k-1 as (node, count) pairs, id-ascending; built
    /// only when k >= 1 and no neighbor pins the threshold.
    pub d: Vec<(u32, u32)>,
}

/// Rebuilds the full sampler state for every alive node and level from the
/// graph, the ranks, and the alive set alone.
///
/// Level i thresholds start at the maximum alive-neighbor threshold of
/// level i-1 and grow until at most `floor_budget` reachable nodes within
/// distance i carry the filter rank. Returned as `state[i][v]`, `None` for
/// dead nodes.
pub fn golden_state(
    g: &Graph,
    h: usize,
    ranks: &[u32],
    alive: &[bool],
    floor_budget: usize,
) -> Vec<Vec<Option<GoldenSample>>> {
    let n = g.node_count();
    let mut levels: Vec<Vec<Option<GoldenSample>>> = Vec::with_capacity(h + 1);
    let base: Vec<Option<GoldenSample>> = (0..n)
        .map(|v| {
            alive[v].then(|| GoldenSample {
                k: 0,
                b: vec![(v as u32, 1)],
                m: 0,
                d: Vec::new(),
            })
        })
        .collect();
    levels.push(base);
    for i in 1..=h {
        let prev = &levels[i - 1];
        let mut level: Vec<Option<GoldenSample>> = (0..n).map(|_| None).collect();
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let alive_neighbors: Vec<u32> = g
                .neighbors(v as u32)
                .iter()
                .copied()
                .filter(|&w| alive[w as usize])
                .collect();
            let lower_bound = alive_neighbors
                .iter()
                .map(|&w| prev[w as usize].as_ref().unwrap().k)
                .max()
                .unwrap_or(0);
            let reachable = nodes_within(g, alive, v as u32, i);
            let mut k = lower_bound;
            while reachable
                .iter()
                .filter(|&&u| ranks[u as usize] >= k)
                .count()
                > floor_budget
            {
                k += 1;
            }
            let b: Vec<(u32, u32)> = reachable
                .iter()
                .copied()
                .filter(|&u| ranks[u as usize] >= k)
                .map(|u| {
                    let from_self = u32::from(u == v as u32);
                    let from_lists = alive_neighbors
                        .iter()
                        .filter(|&&w| {
                            prev[w as usize]
                                .as_ref()
                                .unwrap()
                                .b
                                .binary_search_by_key(&u, |e| e.0)
                                .is_ok()
                        })
                        .count() as u32;
                    (u, from_self + from_lists)
                })
                .collect();
            let m = alive_neighbors
                .iter()
                .filter(|&&w| prev[w as usize].as_ref().unwrap().k == k)
                .count() as u32;
            let mut d = Vec::new();
            if k >= 1 && m == 0 {
                let want = k - 1;
                let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
                for &w in &alive_neighbors {
                    for &(u, _) in &prev[w as usize].as_ref().unwrap().b {
                        if ranks[u as usize] == want {
                            *counts.entry(u).or_insert(0) += 1;
                        }
                    }
                }
                d = counts.into_iter().collect();
            }
            level[v] = Some(GoldenSample { k, b, m, d });
        }
        levels.push(level);
    }
    levels
}

/// Erdos-Renyi graph: each pair independently with probability `p`.
pub fn er_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n as u32 {
        for b in (a + 1)..n as u32 {
            if rng.gen::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Hub-heavy graph: node 0 adjacent to everything, the rest on a ring,
/// plus random chords. One huge-degree node over a low-degree bulk, and
/// diameter two through the hub.
pub fn hub_graph(n: usize, chords: usize, rng: &mut ChaCha8Rng) -> Graph {
    assert!(n >= 4);
    let n32 = n as u32;
    let mut edges = Vec::new();
    for v in 1..n32 {
        edges.push((0, v));
    }
    for v in 1..n32 {
        let next = if v + 1 == n32 { 1 } else { v + 1 };
        edges.push((v, next));
    }
    for _ in 0..chords {
        let a = rng.gen_range(1..n32);
        let b = rng.gen_range(1..n32);
        if a != b {
            edges.push((a, b));
        }
    }
    Graph::from_edges(n, edges)
}

/// Random sparse graph with roughly `n * avg_degree / 2` distinct edges.
pub fn sparse_graph(n: usize, avg_degree: usize, rng: &mut ChaCha8Rng) -> Graph {
    let n32 = n as u32;
    let target = n * avg_degree / 2;
    let mut edges = Vec::with_capacity(target);
    for _ in 0..target {
        let a = rng.gen_range(0..n32);
        let b = rng.gen_range(0..n32);
        if a != b {
            edges.push((a, b));
        }
    }
    Graph::from_edges(n, edges)
}

/// Independent geometric ranks, capped at 64: trailing one-bits of a
/// uniform word give P(rank >= k) = 2^-k.
pub fn geometric_ranks(len: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    (0..len).map(|_| rng.next_u64().trailing_ones()).collect()
}

/// Exact core values as plain integers; the decomposition stores small
/// exact counts, so the cast is lossless.
pub fn core_values_usize(map: &CoreMap<f64>) -> Vec<usize> {
    map.values.iter().map(|&x| x as usize).collect()
}

/// Tally of a full lock-step differential run.
pub struct LockStepOutcome {
    pub deletions: usize,
    pub state_checks: usize,
}

/// Runs both approximate maintainers side by side, checking the complete
/// state of every alive node against the golden reconstruction after each
/// deletion, and that both report the same changed selection keys.
///
/// Deletion order is the shared selection rule recomputed by brute force:
/// smallest estimate, then smallest top-level threshold, then smallest id.
pub fn lock_step_run(g: &Graph, h: usize, epsilon: f64, delta: f64, seed: u64) -> LockStepOutcome {
    let n = g.node_count();
    let config = RunConfig64::with_unchecked_epsilon(n, h, epsilon, delta, seed).unwrap();
    let budget = config.budget();
    let floor_budget = budget.floor() as usize;
    let ranks = sample_ranks(n, seed);
    let rank_values: Vec<u32> = (0..n as u32).map(|v| ranks.rank(v)).collect();
    let mut naive = NaiveState::new(g, h, budget, ranks.clone());
    let mut fast = FastState::new(g, h, budget, ranks);
    let mut alive = vec![true; n];
    let mut deletions = 0usize;
    let mut state_checks = 0usize;
    loop {
        let golden = golden_state(g, h, &rank_values, &alive, floor_budget);
        for v in 0..n as u32 {
            if !alive[v as usize] {
                continue;
            }
            for i in 0..=h {
                let gold = golden[i][v as usize].as_ref().unwrap();
                assert_eq!(
                    naive.threshold(v, i),
                    gold.k,
                    "naive threshold, node {v} level {i}"
                );
                let gold_ids: Vec<u32> = gold.b.iter().map(|e| e.0).collect();
                assert_eq!(
                    naive.sample(v, i),
                    &gold_ids[..],
                    "naive sample, node {v} level {i}"
                );
                assert_eq!(
                    fast.threshold(v, i),
                    gold.k,
                    "fast threshold, node {v} level {i}"
                );
                let mut entries: Vec<(u32, u32)> = fast
                    .sample_entries(v, i)
                    .into_iter()
                    .map(|(node, _, count)| (node, count))
                    .collect();
                entries.sort_unstable_by_key(|e| e.0);
                assert_eq!(entries, gold.b, "fast sample counts, node {v} level {i}");
                if i >= 1 {
                    assert_eq!(
                        fast.threshold_matches(v, i),
                        gold.m,
                        "match counter, node {v} level {i}"
                    );
                    let mut cand = fast.candidate_entries(v, i);
                    cand.sort_unstable_by_key(|e| e.0);
                    assert_eq!(cand, gold.d, "candidate list, node {v} level {i}");
                    let gold_self = gold.d.binary_search_by_key(&v, |e| e.0).is_ok();
                    assert_eq!(
                        fast.self_listed(v, i),
                        gold_self,
                        "self candidate flag, node {v} level {i}"
                    );
                }
                state_checks += 1;
            }
            assert_eq!(
                naive.estimate(v).to_bits(),
                fast.estimate(v).to_bits(),
                "estimate, node {v}"
            );
        }
        let victim = (0..n as u32).filter(|&v| alive[v as usize]).min_by(|&a, &b| {
            let ka = (naive.estimate(a), naive.threshold(a, h), a);
            let kb = (naive.estimate(b), naive.threshold(b, h), b);
            ka.partial_cmp(&kb).unwrap()
        });
        let Some(victim) = victim else {
            break;
        };
        let mut changed_naive = update_naive(&mut naive, g, victim);
        let mut changed_fast = update_fast(&mut fast, g, victim);
        changed_naive.sort_unstable();
        changed_naive.dedup();
        changed_fast.sort_unstable();
        changed_fast.dedup();
        assert_eq!(
            changed_naive, changed_fast,
            "changed-key sets after deleting {victim}"
        );
        alive[victim as usize] = false;
        deletions += 1;
    }
    LockStepOutcome {
        deletions,
        state_checks,
    }
}
