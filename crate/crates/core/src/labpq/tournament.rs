//! Tournament-tree backend.
//!
//! Complete binary tree in heap layout: interior nodes `1..cap`, leaf for
//! slot `s` at node `cap + s`. Interior nodes cache the minimum live key of
//! their subtree; `renew` flags mark the paths whose cache is stale. Updates
//! only set flags (`mark`), and the next exclusive operation repairs the
//! flagged paths top-down (`sync`).
//!
//! Slots and record ids coincide until `delete_batch` moves tail records
//! into holes.

use std::ops::Range;
use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, AtomicUsize, Ordering::Relaxed};
use std::sync::Arc;

use super::{Augmentation, LabPq};
use crate::dist::{Distance, DistanceMap, INF};
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;
/// Subtrees with at least this many leaves are processed with `rayon::join`.
const PAR_LEAVES: usize = 1 << 13;

/// Node-touch counters, one unit per O(1) step on a tree node.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct WorkCounters {
    /// Leaf writes and `renew` test-and-set attempts made by `mark`.
    pub mark: u64,
    /// Interior nodes recomputed by `sync`, plus one root check per call.
    pub sync: u64,
    /// Nodes visited by both extraction passes.
    pub extract: u64,
}

impl WorkCounters {
    pub fn total(&self) -> u64 {
        self.mark + self.sync + self.extract
    }
}

#[derive(Debug, Default)]
struct Counters {
    mark: AtomicU64,
    sync: AtomicU64,
    extract: AtomicU64,
}

pub struct TournamentTree {
    dist: Arc<DistanceMap>,
    aug: Option<Arc<dyn Augmentation>>,
    cap: usize,
    live: usize,
    next_id: u32,
    key: Vec<AtomicU64>,
    agg: Vec<AtomicU64>,
    renew: Vec<AtomicBool>,
    count: Vec<AtomicU32>,
    in_q: Vec<AtomicBool>,
    id_of: Vec<u32>,
    slot_of: Vec<u32>,
    permuted: bool,
    queued: AtomicUsize,
    counters: Counters,
}

impl std::fmt::Debug for TournamentTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TournamentTree")
            .field("cap", &self.cap)
            .field("live", &self.live)
            .field("queued", &self.queued.load(Relaxed))
            .finish()
    }
}

fn atomics_u64(n: usize, v: u64) -> Vec<AtomicU64> {
    (0..n).map(|_| AtomicU64::new(v)).collect()
}

fn atomics_bool(n: usize) -> Vec<AtomicBool> {
    (0..n).map(|_| AtomicBool::new(false)).collect()
}

impl TournamentTree {
    /// An empty queue over records `0..n`.
    pub fn new(dist: Arc<DistanceMap>, n: usize) -> Self {
        Self::build(dist, n, &[], None)
    }

    /// Builds a tree over records `0..n` with `live` initially queued.
    pub fn build(
        dist: Arc<DistanceMap>,
        n: usize,
        live: &[u32],
        aug: Option<Arc<dyn Augmentation>>,
    ) -> Self {
        assert!(n <= dist.len(), "tree of {n} records over a distance map of {}", dist.len());
        let cap = n.next_power_of_two().max(2);
        let mut id_of = vec![NONE; cap];
        let mut slot_of = vec![NONE; dist.len()];
        for i in 0..n {
            id_of[i] = i as u32;
            slot_of[i] = i as u32;
        }
        let t = Self {
            dist,
            agg: if aug.is_some() { atomics_u64(cap, INF) } else { Vec::new() },
            aug,
            cap,
            live: n,
            next_id: n as u32,
            key: atomics_u64(cap, INF),
            renew: atomics_bool(cap),
            count: (0..cap).map(|_| AtomicU32::new(0)).collect(),
            in_q: atomics_bool(cap),
            id_of,
            slot_of,
            permuted: false,
            queued: AtomicUsize::new(0),
            counters: Counters::default(),
        };
        for &id in live {
            if !t.in_q[id as usize].swap(true, Relaxed) {
                t.queued.fetch_add(1, Relaxed);
            }
        }
        t.rebuild();
        t
    }

    /// Number of leaves including INF-keyed padding.
    pub fn capacity(&self) -> usize {
        self.cap
    }

    /// Number of allocated records.
    pub fn size(&self) -> usize {
        self.live
    }

    pub fn augmentation(&self) -> Option<&Arc<dyn Augmentation>> {
        self.aug.as_ref()
    }

    pub fn counters(&self) -> WorkCounters {
        WorkCounters {
            mark: self.counters.mark.load(Relaxed),
            sync: self.counters.sync.load(Relaxed),
            extract: self.counters.extract.load(Relaxed),
        }
    }

    pub fn reset_counters(&self) {
        self.counters.mark.store(0, Relaxed);
        self.counters.sync.store(0, Relaxed);
        self.counters.extract.store(0, Relaxed);
    }

    pub fn contains(&self, id: u32) -> bool {
        match self.slot_of.get(id as usize) {
            Some(&s) if s != NONE => self.in_q[s as usize].load(Relaxed),
            _ => false,
        }
    }

    pub fn is_allocated(&self, id: u32) -> bool {
        self.slot_of.get(id as usize).is_some_and(|&s| s != NONE)
    }

    /// Cached key of interior node `node` (heap index, root = 1).
    pub fn node_key(&self, node: usize) -> Distance {
        self.key[node].load(Relaxed)
    }

    /// Whether interior node `node` carries a set `renew` flag.
    pub fn node_renew(&self, node: usize) -> bool {
        self.renew[node].load(Relaxed)
    }

    /// Number of interior nodes with `renew` set.
    pub fn renew_count(&self) -> usize {
        self.renew[1..].iter().filter(|r| r.load(Relaxed)).count()
    }

    /// Key of the leaf at `slot` as seen by the tree: `δ[id]` if queued, else
    /// INF. Queued keys are capped at `INF - 1` so that an INF node key always
    /// means an empty subtree, which extraction can skip.
    fn leaf_key(&self, slot: usize) -> Distance {
        if self.in_q[slot].load(Relaxed) {
            self.dist.get(self.id_of[slot]).min(INF - 1)
        } else {
            INF
        }
    }

    fn leaf_agg(&self, slot: usize, aug: &dyn Augmentation) -> u64 {
        if self.in_q[slot].load(Relaxed) {
            let id = self.id_of[slot];
            aug.map(id, self.dist.get(id))
        } else {
            aug.identity()
        }
    }

    fn subtree_leaves(&self, node: usize) -> usize {
        self.cap >> (usize::BITS - 1 - node.leading_zeros())
    }

    /// Sets the leaf's queued flag and flags its root path for repair. The walk
    /// stops at the first ancestor whose flag was already set.
    pub fn mark(&self, slot: usize, newflag: bool) {
        let was = self.in_q[slot].swap(newflag, Relaxed);
        if was != newflag {
            if newflag {
                self.queued.fetch_add(1, Relaxed);
            } else {
                self.queued.fetch_sub(1, Relaxed);
            }
        }
        let mut touches = 1;
        let mut t = self.cap + slot;
        while t != 1 {
            touches += 1;
            if self.renew[t / 2].swap(true, Relaxed) {
                break;
            }
            t /= 2;
        }
        self.counters.mark.fetch_add(touches, Relaxed);
    }

    /// Recomputes every interior node from scratch and clears all flags.
    fn rebuild(&self) {
        self.rebuild_node(1);
    }

    fn rebuild_node(&self, t: usize) -> (Distance, u64) {
        let child = |c: usize| -> (Distance, u64) {
            if c >= self.cap {
                let s = c - self.cap;
                let a = self.aug.as_ref().map_or(0, |a| self.leaf_agg(s, a.as_ref()));
                (self.leaf_key(s), a)
            } else {
                self.rebuild_node(c)
            }
        };
        let (l, r) = if self.subtree_leaves(t) >= PAR_LEAVES {
            rayon::join(|| child(2 * t), || child(2 * t + 1))
        } else {
            (child(2 * t), child(2 * t + 1))
        };
        self.renew[t].store(false, Relaxed);
        self.store(t, l, r)
    }

    fn store(&self, t: usize, l: (Distance, u64), r: (Distance, u64)) -> (Distance, u64) {
        let k = l.0.min(r.0);
        self.key[t].store(k, Relaxed);
        let a = match &self.aug {
            Some(aug) => {
                let a = aug.combine(l.1, r.1);
                self.agg[t].store(a, Relaxed);
                a
            }
            None => 0,
        };
        (k, a)
    }

    /// Repairs all flagged paths and returns the root key.
    pub fn sync(&self) -> Distance {
        let mut touches = 1;
        if self.renew[1].load(Relaxed) {
            touches += self.sync_node(1);
        }
        self.counters.sync.fetch_add(touches, Relaxed);
        self.key[1].load(Relaxed)
    }

    fn sync_node(&self, t: usize) -> u64 {
        self.renew[t].store(false, Relaxed);
        let child = |c: usize| -> ((Distance, u64), u64) {
            if c >= self.cap {
                let s = c - self.cap;
                let a = self.aug.as_ref().map_or(0, |a| self.leaf_agg(s, a.as_ref()));
                ((self.leaf_key(s), a), 0)
            } else {
                let touched = if self.renew[c].load(Relaxed) { self.sync_node(c) } else { 0 };
                let a = if self.aug.is_some() { self.agg[c].load(Relaxed) } else { 0 };
                ((self.key[c].load(Relaxed), a), touched)
            }
        };
        let (l, r) = if self.subtree_leaves(t) >= PAR_LEAVES {
            rayon::join(|| child(2 * t), || child(2 * t + 1))
        } else {
            (child(2 * t), child(2 * t + 1))
        };
        self.store(t, l.0, r.0);
        1 + l.1 + r.1
    }

    fn qualifies(&self, slot: usize, theta: Distance) -> bool {
        self.in_q[slot].load(Relaxed) && self.dist.get(self.id_of[slot]) <= theta
    }

    /// First pass: counts qualifying leaves, caching per-node counts.
    fn count_from(&self, t: usize, theta: Distance) -> (u32, u64) {
        if t >= self.cap {
            return (self.qualifies(t - self.cap, theta) as u32, 1);
        }
        let key = self.key[t].load(Relaxed);
        if key == INF || theta < key {
            self.count[t].store(0, Relaxed);
            return (0, 1);
        }
        let ((lc, lt), (rc, rt)) = if self.subtree_leaves(t) >= PAR_LEAVES {
            rayon::join(|| self.count_from(2 * t, theta), || self.count_from(2 * t + 1, theta))
        } else {
            (self.count_from(2 * t, theta), self.count_from(2 * t + 1, theta))
        };
        self.count[t].store(lc + rc, Relaxed);
        (lc + rc, 1 + lt + rt)
    }

    fn count_of(&self, t: usize, theta: Distance) -> usize {
        if t >= self.cap {
            self.qualifies(t - self.cap, theta) as usize
        } else {
            self.count[t].load(Relaxed) as usize
        }
    }

    /// Second pass: writes qualifying ids into `out` and unmarks them.
    fn write_from(&self, t: usize, theta: Distance, out: &mut [u32]) -> u64 {
        if t >= self.cap {
            let s = t - self.cap;
            if !out.is_empty() {
                out[0] = self.id_of[s];
                self.mark(s, false);
            }
            return 1;
        }
        if out.is_empty() {
            return 1;
        }
        let lc = self.count_of(2 * t, theta);
        let (lo, hi) = out.split_at_mut(lc);
        let (lt, rt) = if self.subtree_leaves(t) >= PAR_LEAVES {
            rayon::join(
                || self.write_from(2 * t, theta, lo),
                || self.write_from(2 * t + 1, theta, hi),
            )
        } else {
            (self.write_from(2 * t, theta, lo), self.write_from(2 * t + 1, theta, hi))
        };
        1 + lt + rt
    }

    /// Adds `k` fresh queued records and returns their ids. Ids are never
    /// reused, so the distance map must have room for them.
    pub fn grow(&mut self, k: usize) -> Result<Range<u32>> {
        if k == 0 {
            return Err(Error::Domain("grow by zero records".into()));
        }
        let first = self.next_id as usize;
        if first + k > self.dist.len() {
            return Err(Error::Domain(format!(
                "growing to id {} exceeds the distance map of {}",
                first + k,
                self.dist.len()
            )));
        }
        let new_live = self.live + k;
        if new_live > self.cap {
            self.reallocate(new_live.next_power_of_two());
        }
        for (i, id) in (first..first + k).enumerate() {
            let slot = self.live + i;
            self.id_of[slot] = id as u32;
            self.slot_of[id] = slot as u32;
            self.mark(slot, true);
        }
        self.live = new_live;
        self.next_id = (first + k) as u32;
        Ok(first as u32..(first + k) as u32)
    }

    fn reallocate(&mut self, cap: usize) {
        let old = self.cap;
        self.cap = cap;
        self.key = atomics_u64(cap, INF);
        if self.aug.is_some() {
            self.agg = atomics_u64(cap, INF);
        }
        self.renew = atomics_bool(cap);
        self.count = (0..cap).map(|_| AtomicU32::new(0)).collect();
        let mut in_q = atomics_bool(cap);
        for (s, f) in in_q.iter_mut().enumerate().take(old) {
            *f.get_mut() = self.in_q[s].load(Relaxed);
        }
        self.in_q = in_q;
        self.id_of.resize(cap, NONE);
        self.rebuild();
    }

    /// Removes `ids`, filling the holes they leave with records from the
    /// tail slots. Returns the number of records moved.
    pub fn delete_batch(&mut self, ids: &[u32]) -> Result<usize> {
        let mut seen = std::collections::HashSet::with_capacity(ids.len());
        for &id in ids {
            if !self.is_allocated(id) {
                return Err(Error::Domain(format!("record {id} is not allocated")));
            }
            if !seen.insert(id) {
                return Err(Error::Domain(format!("record {id} deleted twice")));
            }
        }
        let new_live = self.live - ids.len();
        let mut holes = Vec::new();
        for &id in ids {
            let s = self.slot_of[id as usize] as usize;
            if self.in_q[s].load(Relaxed) {
                self.queued.fetch_sub(1, Relaxed);
                self.in_q[s].store(false, Relaxed);
            }
            self.slot_of[id as usize] = NONE;
            self.id_of[s] = NONE;
            if s < new_live {
                holes.push(s);
            } else {
                self.mark(s, false);
            }
        }
        let movers: Vec<usize> = (new_live..self.live).filter(|&s| self.id_of[s] != NONE).collect();
        debug_assert_eq!(movers.len(), holes.len());
        for (&hole, &from) in holes.iter().zip(&movers) {
            let id = self.id_of[from];
            let flag = self.in_q[from].swap(false, Relaxed);
            self.id_of[hole] = id;
            self.id_of[from] = NONE;
            self.slot_of[id as usize] = hole as u32;
            self.in_q[hole].store(flag, Relaxed);
            // Counted moves keep `queued` unchanged: mark(.., flag) sees the flag already set.
            self.mark(hole, flag);
            self.mark(from, false);
        }
        self.live = new_live;
        if !movers.is_empty() {
            self.permuted = true;
        }
        Ok(movers.len())
    }

    /// Checks the post-sync invariant against a brute-force recomputation.
    /// Returns the first offending node.
    pub fn check_synced(&self) -> std::result::Result<(), String> {
        for t in 1..self.cap {
            if self.renew[t].load(Relaxed) {
                return Err(format!("node {t} still flagged"));
            }
        }
        let mut want = vec![INF; 2 * self.cap];
        let mut want_agg = vec![0u64; 2 * self.cap];
        for s in 0..self.cap {
            want[self.cap + s] = self.leaf_key(s);
            if let Some(a) = &self.aug {
                want_agg[self.cap + s] = self.leaf_agg(s, a.as_ref());
            }
        }
        for t in (1..self.cap).rev() {
            want[t] = want[2 * t].min(want[2 * t + 1]);
            let got = self.key[t].load(Relaxed);
            if got != want[t] {
                return Err(format!("node {t}: key {got}, subtree minimum {}", want[t]));
            }
            if let Some(a) = &self.aug {
                want_agg[t] = a.combine(want_agg[2 * t], want_agg[2 * t + 1]);
                let got = self.agg[t].load(Relaxed);
                if got != want_agg[t] {
                    return Err(format!("node {t}: aug {got}, expected {}", want_agg[t]));
                }
            }
        }
        Ok(())
    }
}

impl LabPq for TournamentTree {
    fn update(&self, id: u32) {
        let slot = self.slot_of[id as usize];
        debug_assert!(slot != NONE, "update of unallocated record {id}");
        self.mark(slot as usize, true);
    }

    fn extract(&mut self, theta: Distance) -> Vec<u32> {
        if self.sync() > theta {
            return Vec::new();
        }
        let (n, t1) = self.count_from(1, theta);
        let mut out = vec![0u32; n as usize];
        let t2 = self.write_from(1, theta, &mut out);
        self.counters.extract.fetch_add(t1 + t2, Relaxed);
        if self.permuted {
            out.sort_unstable();
        }
        out
    }

    fn len(&self) -> usize {
        self.queued.load(Relaxed)
    }

    fn min_key(&mut self) -> Distance {
        match self.sync() {
            k if k == INF - 1 => INF,
            k => k,
        }
    }

    fn reduce(&mut self) -> Result<u64> {
        if self.aug.is_none() {
            return Err(Error::Config("reduce on a queue without an augmentation".into()));
        }
        self.sync();
        Ok(self.agg[1].load(Relaxed))
    }

    fn queued(&mut self) -> Vec<u32> {
        let mut ids: Vec<u32> = (0..self.live)
            .filter(|&s| self.in_q[s].load(Relaxed))
            .map(|s| self.id_of[s])
            .collect();
        if self.permuted {
            ids.sort_unstable();
        }
        ids
    }

    fn distances(&self) -> &Arc<DistanceMap> {
        &self.dist
    }
}
