//! Counted, sorted entry lists with stable handles.
//!
//! A list stores (node, rank, count) entries ordered by rank descending,
//! node id ascending, in a build-once arena: entries are created only when
//! a list is rebuilt wholesale and only decremented or unlinked in between,
//! so arena indices stay valid as handles for the entire life of a build.
//! Removed entries stay behind as unlinked tombstones until the next
//! rebuild drops the arena.
//!
//! Each entry can carry a slot array: per adjacency position of the list
//! owner, positions for a handle into that neighbor's dependent list and
//! its candidate list. Slots travel with the entry when it is removed, so
//! a removal record knows exactly which downstream entries to decrement.

/// Index of an entry within a list's arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Handle(pub(crate) u32);

impl Handle {
    pub const NULL: Handle = Handle(u32::MAX);

    pub fn is_null(self) -> bool {
        self.0 == u32::MAX
    }
}

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Entry {
    node: u32,
    rank: u32,
    count: u32,
    prev: u32,
    next: u32,
    slots: Box<[u32]>,
}

/// Returns whether key (rank_a, node_a) orders before (rank_b, node_b).
fn key_before(rank_a: u32, node_a: u32, rank_b: u32, node_b: u32) -> bool {
    rank_a > rank_b || (rank_a == rank_b && node_a < node_b)
}

/// Sorted multiset of counted entries; see the module docs.
#[derive(Debug, Clone, Default)]
pub struct CountedList {
    arena: Vec<Entry>,
    head: u32,
    len: u32,
}

/// Result of removing one contribution from an entry.
#[derive(Debug)]
pub(crate) enum Decrement {
    /// Contributions remain; the entry stays listed.
    Kept,
    /// The last contribution is gone; the entry was unlinked and its node
    /// and slot array are handed back.
    Removed { node: u32, slots: Box<[u32]> },
}

impl CountedList {
    pub fn new() -> CountedList {
        CountedList {
            arena: Vec::new(),
            head: NONE,
            len: 0,
        }
    }

    /// List holding one entry with count 1 and no slots.
    pub fn singleton(node: u32, rank: u32) -> CountedList {
        CountedList {
            arena: vec![Entry {
                node,
                rank,
                count: 1,
                prev: NONE,
                next: NONE,
                slots: Box::default(),
            }],
            head: 0,
            len: 1,
        }
    }

    /// Builds a list from entries already ordered by rank descending, node
    /// ascending, without duplicate nodes.
    pub fn from_sorted_entries(entries: &[(u32, u32, u32)]) -> CountedList {
        let mut list = CountedList::new();
        for &(node, rank, count) in entries {
            debug_assert!(count > 0, "entries carry at least one contribution");
            list.push_back(node, rank, count);
        }
        list
    }

    /// Appends an entry that must order after everything present.
    pub(crate) fn push_back(&mut self, node: u32, rank: u32, count: u32) -> Handle {
        debug_assert!(
            self.arena.is_empty() || {
                let last = &self.arena[self.arena.len() - 1];
                key_before(last.rank, last.node, rank, node)
            },
            "push_back preserves (rank desc, node asc) order"
        );
        self.push_back_unordered(node, rank, count)
    }

    /// Appends an entry without an ordering requirement. Candidate lists
    /// keep encounter order instead of rank order.
    pub(crate) fn push_back_unordered(&mut self, node: u32, rank: u32, count: u32) -> Handle {
        debug_assert_eq!(
            self.len as usize,
            self.arena.len(),
            "lists only grow while being built, never after removals"
        );
        let idx = self.arena.len() as u32;
        let prev = if idx == 0 { NONE } else { idx - 1 };
        self.arena.push(Entry {
            node,
            rank,
            count,
            prev,
            next: NONE,
            slots: Box::default(),
        });
        if idx == 0 {
            self.head = 0;
        } else {
            self.arena[prev as usize].next = idx;
        }
        self.len += 1;
        Handle(idx)
    }

    /// Adds one contribution to the entry behind `h`.
    pub(crate) fn increment(&mut self, h: Handle) {
        debug_assert!(self.arena[h.0 as usize].count > 0, "incrementing a tombstone");
        self.arena[h.0 as usize].count += 1;
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Live entries as (node, rank, count), in list order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        let mut cursor = self.head;
        std::iter::from_fn(move || {
            if cursor == NONE {
                return None;
            }
            let e = &self.arena[cursor as usize];
            cursor = e.next;
            Some((e.node, e.rank, e.count))
        })
    }

    pub(crate) fn head_handle(&self) -> Handle {
        Handle(self.head)
    }

    pub(crate) fn next_handle(&self, h: Handle) -> Handle {
        Handle(self.arena[h.0 as usize].next)
    }

    pub(crate) fn node_at(&self, h: Handle) -> u32 {
        self.arena[h.0 as usize].node
    }

    pub(crate) fn rank_at(&self, h: Handle) -> u32 {
        self.arena[h.0 as usize].rank
    }

    pub(crate) fn slots_mut(&mut self, h: Handle) -> &mut [u32] {
        &mut self.arena[h.0 as usize].slots
    }

    pub(crate) fn set_slots(&mut self, h: Handle, slots: Box<[u32]>) {
        self.arena[h.0 as usize].slots = slots;
    }

    pub(crate) fn take_slots(&mut self, h: Handle) -> Box<[u32]> {
        std::mem::take(&mut self.arena[h.0 as usize].slots)
    }

    /// Rank of the entry at `index` in list order.
    pub(crate) fn rank_at_index(&self, index: usize) -> u32 {
        debug_assert!(index < self.len(), "index within the live entries");
        let mut cursor = self.head;
        for _ in 0..index {
            cursor = self.arena[cursor as usize].next;
        }
        self.arena[cursor as usize].rank
    }

    /// Removes one contribution from the entry behind `h`.
    pub(crate) fn decrement_take(&mut self, h: Handle) -> Decrement {
        let idx = h.0 as usize;
        debug_assert!(self.arena[idx].count > 0, "decrementing a tombstone");
        self.arena[idx].count -= 1;
        if self.arena[idx].count > 0 {
            return Decrement::Kept;
        }
        let (prev, next) = (self.arena[idx].prev, self.arena[idx].next);
        if prev == NONE {
            self.head = next;
        } else {
            self.arena[prev as usize].next = next;
        }
        if next != NONE {
            self.arena[next as usize].prev = prev;
        }
        self.len -= 1;
        Decrement::Removed {
            node: self.arena[idx].node,
            slots: std::mem::take(&mut self.arena[idx].slots),
        }
    }

    /// Drops every entry whose rank is below `k`. Entries are ordered by
    /// rank, so this cuts a tail.
    pub(crate) fn truncate_below_rank(&mut self, k: u32) {
        let mut cursor = self.head;
        let mut kept = 0u32;
        let mut last = NONE;
        while cursor != NONE && self.arena[cursor as usize].rank >= k {
            kept += 1;
            last = cursor;
            cursor = self.arena[cursor as usize].next;
        }
        if last == NONE {
            self.head = NONE;
        } else {
            self.arena[last as usize].next = NONE;
        }
        self.len = kept;
    }

    /// Drains the live entries as (node, slot array) removal records,
    /// leaving the list empty.
    pub(crate) fn take_records(&mut self) -> Vec<(u32, Box<[u32]>)> {
        let mut records = Vec::with_capacity(self.len());
        let mut cursor = self.head;
        while cursor != NONE {
            let e = &mut self.arena[cursor as usize];
            records.push((e.node, std::mem::take(&mut e.slots)));
            cursor = e.next;
        }
        self.head = NONE;
        self.len = 0;
        records
    }

    /// Copies the prefix of entries with rank at least `k` as fresh
    /// contributions: every copied count is 1 and slots are empty.
    pub(crate) fn contributions_at(&self, k: u32) -> CountedList {
        let mut out = CountedList::new();
        let mut cursor = self.head;
        while cursor != NONE {
            let e = &self.arena[cursor as usize];
            if e.rank < k {
                break;
            }
            out.push_back(e.node, e.rank, 1);
            cursor = e.next;
        }
        out
    }
}

/// Merges two sorted counted lists, summing the counts of shared nodes.
///
/// The result is a fresh list with empty slot arrays.
pub fn merge_sorted(x: &CountedList, y: &CountedList) -> CountedList {
    let mut out = CountedList::new();
    out.arena.reserve(x.len() + y.len());
    let mut cx = x.head;
    let mut cy = y.head;
    while cx != NONE || cy != NONE {
        let take_x = if cx == NONE {
            false
        } else if cy == NONE {
            true
        } else {
            let ex = &x.arena[cx as usize];
            let ey = &y.arena[cy as usize];
            if ex.node == ey.node {
                debug_assert_eq!(ex.rank, ey.rank, "a node has one rank");
                out.push_back(ex.node, ex.rank, ex.count + ey.count);
                cx = ex.next;
                cy = ey.next;
                continue;
            }
            key_before(ex.rank, ex.node, ey.rank, ey.node)
        };
        if take_x {
            let ex = &x.arena[cx as usize];
            out.push_back(ex.node, ex.rank, ex.count);
            cx = ex.next;
        } else {
            let ey = &y.arena[cy as usize];
            out.push_back(ey.node, ey.rank, ey.count);
            cy = ey.next;
        }
    }
    out
}

/// Removes one contribution per handle; null handles are skipped. Returns
/// the nodes whose entries disappeared entirely, in processing order.
pub fn delete_entries(list: &mut CountedList, handles: &[Handle]) -> Vec<u32> {
    let mut removed = Vec::new();
    for &h in handles {
        if h.is_null() {
            continue;
        }
        if let Decrement::Removed { node, .. } = list.decrement_take(h) {
            removed.push(node);
        }
    }
    removed
}
