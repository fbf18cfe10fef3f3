//! Exact (k,h)-core decomposition by iterated minimum-reach peeling.
//!
//! Repeatedly delete an alive node with the fewest alive nodes within
//! distance h; the running maximum of those counts at deletion time is the
//! deleted node's core number. With h = 1 this is the classical k-core
//! peeling.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph_core::{AliveMask, BfsScratch, Graph};
use crate::{cast, Real};

/// Core number per node together with the order peeling removed them.
///
/// `position[v]` is the index of `v` in `deletion_order`. Values are stored
/// in the working scalar because the approximate decompositions report
/// fractional values; exact values are whole numbers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoreMap<S: Real> {
    pub values: Vec<S>,
    pub deletion_order: Vec<u32>,
    pub position: Vec<u32>,
}

impl<S: Real> CoreMap<S> {
    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, v: u32) -> S {
        self.values[v as usize]
    }

    pub(crate) fn with_capacity(n: usize) -> CoreMap<S> {
        CoreMap {
            values: vec![S::zero(); n],
            deletion_order: Vec::with_capacity(n),
            position: vec![0; n],
        }
    }

    pub(crate) fn record(&mut self, v: u32, value: S) {
        self.values[v as usize] = value;
        self.position[v as usize] = self.deletion_order.len() as u32;
        self.deletion_order.push(v);
    }
}

/// Computes the exact (k,h)-core number of every node.
///
/// Ties on the reach count break toward the smaller node id. An empty graph
/// yields an empty map.
pub fn exact_core_decomposition<S: Real>(g: &Graph, h: usize) -> CoreMap<S> {
    assert!(h >= 1, "h must be at least 1");
    let n = g.node_count();
    let mut map = CoreMap::with_capacity(n);
    if n == 0 {
        return map;
    }

    let mut mask = AliveMask::new(n);
    let mut scratch = BfsScratch::new(n);
    let mut reach = vec![0usize; n];
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = BinaryHeap::with_capacity(n);
    for v in 0..n as u32 {
        reach[v as usize] = scratch.reach(g, &mask, v, h).len() - 1;
        heap.push(Reverse((reach[v as usize], v)));
    }

    let mut current = 0usize;
    while mask.remaining() > 0 {
        let Reverse((d, v)) = heap.pop().expect("heap holds every alive node");
        // Lazy deletion: stale entries carry an outdated reach count.
        if !mask.is_alive(v) || d != reach[v as usize] {
            continue;
        }
        current = current.max(d);
        map.record(v, cast(current));

        // Only nodes within distance h of v can change, and their new reach
        // must be measured after v is gone.
        let affected = scratch.reach(g, &mask, v, h).to_vec();
        mask.kill(v);
        for &w in &affected {
            if mask.is_alive(w) {
                reach[w as usize] = scratch.reach(g, &mask, w, h).len() - 1;
                heap.push(Reverse((reach[w as usize], w)));
            }
        }
    }
    map
}
