//! Graph loading, compact adjacency storage, and bounded-distance
//! neighborhood queries.
//!
//! Graphs are simple and undirected: self-loops and duplicate edges are
//! dropped at construction. Node ids are compacted to `0..n` in order of
//! first appearance; the original labels are kept for output.

use std::collections::HashMap;
use std::io::BufRead;

use thiserror::Error;

/// Edge-list input that could not be parsed.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: expected two endpoints, found {found} fields")]
    BadArity { line: usize, found: usize },
    #[error("line {line}: invalid node id {token:?}")]
    BadToken { line: usize, token: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Node argument that does not denote a usable node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum NodeError {
    #[error("node {0} is out of range")]
    OutOfRange(u32),
    #[error("node {0} has been deleted")]
    Dead(u32),
}

/// Undirected simple graph in compressed sparse row form.
///
/// Adjacency lists are sorted ascending by compacted id.
#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    original_ids: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph on `n` nodes from an edge iterator.
    ///
    /// Self-loops and duplicate edges are dropped; nodes outside `0..n`
    /// panic. Nodes not mentioned by any edge stay isolated. Original ids
    /// are the identity.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Graph {
        let pairs: Vec<(u32, u32)> = edges.into_iter().collect();
        for &(a, b) in &pairs {
            assert!(
                (a as usize) < n && (b as usize) < n,
                "edge ({a}, {b}) references a node outside 0..{n}"
            );
        }
        let original_ids = (0..n as u64).collect();
        Graph::build(n, original_ids, pairs)
    }

    fn build(n: usize, original_ids: Vec<u64>, pairs: Vec<(u32, u32)>) -> Graph {
        let mut edges: Vec<(u32, u32)> = pairs
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        edges.sort_unstable();
        edges.dedup();

        let mut degree = vec![0usize; n];
        for &(a, b) in &edges {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0u32; acc];
        for &(a, b) in &edges {
            targets[cursor[a as usize]] = b;
            cursor[a as usize] += 1;
            targets[cursor[b as usize]] = a;
            cursor[b as usize] += 1;
        }
        // Sorted (a, b) insertion already leaves each row sorted for the
        // lower endpoint but not the upper one, so sort every row.
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph {
            offsets,
            targets,
            original_ids,
            edge_count: edges.len(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.original_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    /// Total length of the adjacency array (twice the edge count).
    pub fn neighbors_len(&self) -> usize {
        self.targets.len()
    }

    /// Flat index of the `j`-th adjacency slot of `v`, for arrays aligned
    /// with the adjacency layout.
    pub fn adjacency_slot(&self, v: u32, j: usize) -> usize {
        self.offsets[v as usize] + j
    }

    /// Label the node carried in the input file.
    pub fn original_id(&self, v: u32) -> u64 {
        self.original_ids[v as usize]
    }
}

/// Reads a whitespace-separated edge list.
///
/// Lines starting with `#` or `%` and blank lines are skipped. Node ids are
/// arbitrary non-negative integers, compacted to `0..n` in order of first
/// appearance. Self-loops and duplicate edges are dropped after compaction.
pub fn load_edge_list(reader: impl BufRead) -> Result<Graph, ParseError> {
    let mut ids: HashMap<u64, u32> = HashMap::new();
    let mut original_ids: Vec<u64> = Vec::new();
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let mut intern = |raw: u64| -> u32 {
        *ids.entry(raw).or_insert_with(|| {
            original_ids.push(raw);
            (original_ids.len() - 1) as u32
        })
    };
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(ParseError::BadArity {
                line: line_no,
                found: fields.len(),
            });
        }
        let mut endpoints = [0u64; 2];
        for (slot, token) in endpoints.iter_mut().zip(&fields) {
            *slot = token.parse().map_err(|_| ParseError::BadToken {
                line: line_no,
                token: (*token).to_string(),
            })?;
        }
        pairs.push((intern(endpoints[0]), intern(endpoints[1])));
    }
    let n = original_ids.len();
    Ok(Graph::build(n, original_ids, pairs))
}

/// Tracks which nodes are still present while a decomposition peels.
#[derive(Debug, Clone)]
pub struct AliveMask {
    alive: Vec<bool>,
    remaining: usize,
}

impl AliveMask {
    pub fn new(n: usize) -> AliveMask {
        AliveMask {
            alive: vec![true; n],
            remaining: n,
        }
    }

    /// Deletes a node. The node must currently be alive.
    pub fn kill(&mut self, v: u32) {
        assert!(self.alive[v as usize], "node {v} deleted twice");
        self.alive[v as usize] = false;
        self.remaining -= 1;
    }

    pub fn is_alive(&self, v: u32) -> bool {
        self.alive[v as usize]
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn len(&self) -> usize {
        self.alive.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alive.is_empty()
    }

    pub fn iter_alive(&self) -> impl Iterator<Item = u32> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(v, _)| v as u32)
    }
}

/// Nodes reachable from `v` over at most `h` edges through alive nodes,
/// including `v` itself, sorted ascending.
///
/// `v` must be in range and alive; dead nodes never appear in the result.
pub fn h_neighborhood(
    g: &Graph,
    v: u32,
    h: usize,
    mask: &AliveMask,
) -> Result<Vec<u32>, NodeError> {
    if (v as usize) >= g.node_count() {
        return Err(NodeError::OutOfRange(v));
    }
    if !mask.is_alive(v) {
        return Err(NodeError::Dead(v));
    }
    let mut scratch = BfsScratch::new(g.node_count());
    let mut out = scratch.reach(g, mask, v, h).to_vec();
    out.sort_unstable();
    Ok(out)
}

/// Reusable bounded breadth-first search state.
///
/// Visited marks are epoch-stamped so repeated searches avoid clearing.
pub(crate) struct BfsScratch {
    seen: Vec<u32>,
    epoch: u32,
    queue: Vec<u32>,
    collected: Vec<u32>,
}

impl BfsScratch {
    pub(crate) fn new(n: usize) -> BfsScratch {
        BfsScratch {
            seen: vec![0; n],
            epoch: 0,
            queue: Vec::new(),
            collected: Vec::new(),
        }
    }

    /// Collects every alive node within distance `h` of `v`, including `v`,
    /// in visitation order. The slice is valid until the next call.
    pub(crate) fn reach(&mut self, g: &Graph, mask: &AliveMask, v: u32, h: usize) -> &[u32] {
        if self.epoch == u32::MAX {
            self.seen.fill(0);
            self.epoch = 0;
        }
        self.epoch += 1;
        let epoch = self.epoch;
        self.queue.clear();
        self.collected.clear();
        self.seen[v as usize] = epoch;
        self.queue.push(v);
        self.collected.push(v);
        let mut frontier_start = 0usize;
        for _ in 0..h {
            let frontier_end = self.queue.len();
            if frontier_start == frontier_end {
                break;
            }
            for qi in frontier_start..frontier_end {
                let u = self.queue[qi];
                for &w in g.neighbors(u) {
                    if self.seen[w as usize] != epoch && mask.is_alive(w) {
                        self.seen[w as usize] = epoch;
                        self.queue.push(w);
                        self.collected.push(w);
                    }
                }
            }
            frontier_start = frontier_end;
        }
        &self.collected
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (0..n as u32 - 1).map(|v| (v, v + 1)))
    }

    #[test]
    fn loads_a_two_edge_list() {
        let g = load_edge_list(Cursor::new("0 1\n1 2\n")).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn compacts_ids_in_first_appearance_order() {
        let g = load_edge_list(Cursor::new("7 3\n3 9\n")).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.original_id(0), 7);
        assert_eq!(g.original_id(1), 3);
        assert_eq!(g.original_id(2), 9);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let g = load_edge_list(Cursor::new("# header\n\n% more\n0 1\n")).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn drops_duplicates_and_self_loops() {
        let g = load_edge_list(Cursor::new("0 1\n1 0\n0 1\n2 2\n")).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn reports_bad_arity_with_line_number() {
        let err = load_edge_list(Cursor::new("0 1\n0 1 2\n")).unwrap_err();
        match err {
            ParseError::BadArity { line, found } => {
                assert_eq!(line, 2);
                assert_eq!(found, 3);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn reports_bad_token_with_line_number() {
        let err = load_edge_list(Cursor::new("0 x\n")).unwrap_err();
        match err {
            ParseError::BadToken { line, token } => {
                assert_eq!(line, 1);
                assert_eq!(token, "x");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_input_yields_empty_graph() {
        let g = load_edge_list(Cursor::new("")).unwrap();
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn neighborhood_on_a_path_includes_the_center() {
        let g = path(5);
        let mask = AliveMask::new(5);
        assert_eq!(h_neighborhood(&g, 2, 2, &mask).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(h_neighborhood(&g, 0, 1, &mask).unwrap(), vec![0, 1]);
        assert_eq!(h_neighborhood(&g, 3, 0, &mask).unwrap(), vec![3]);
    }

    #[test]
    fn neighborhood_respects_deletions() {
        let g = path(3);
        let mut mask = AliveMask::new(3);
        mask.kill(1);
        assert_eq!(h_neighborhood(&g, 0, 2, &mask).unwrap(), vec![0]);
        assert_eq!(h_neighborhood(&g, 1, 1, &mask), Err(NodeError::Dead(1)));
    }

    #[test]
    fn neighborhood_rejects_out_of_range_nodes() {
        let g = path(3);
        let mask = AliveMask::new(3);
        assert_eq!(h_neighborhood(&g, 9, 1, &mask), Err(NodeError::OutOfRange(9)));
    }

    #[test]
    fn alive_mask_counts_survivors() {
        let mut mask = AliveMask::new(4);
        assert_eq!(mask.remaining(), 4);
        mask.kill(2);
        assert!(!mask.is_alive(2));
        assert_eq!(mask.remaining(), 3);
        assert_eq!(mask.iter_alive().collect::<Vec<_>>(), vec![0, 1, 3]);
    }
}
