//! Flat-array backend: one bit flag per record.
//!
//! In dense mode the flags are the whole story and `extract` scans all of
//! them. In sparse mode every flagged id is also scattered into a
//! [`ScatterHashTable`], and `extract` scans only the table.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering::Relaxed};
use std::sync::Arc;

use rayon::prelude::*;

use super::{Augmentation, LabPq, ScatterHashTable};
use crate::dist::{Distance, DistanceMap, INF};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QueueMode {
    Dense,
    Sparse,
}

/// Batches smaller than this are processed on the calling thread.
const SEQ_BATCH: usize = 1 << 12;

pub struct ArrayPq {
    dist: Arc<DistanceMap>,
    aug: Option<Arc<dyn Augmentation>>,
    flags: Vec<AtomicU64>,
    n: usize,
    queued: AtomicUsize,
    mode: QueueMode,
    table: ScatterHashTable,
    spare: ScatterHashTable,
}

impl std::fmt::Debug for ArrayPq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ArrayPq")
            .field("n", &self.n)
            .field("mode", &self.mode)
            .field("queued", &self.queued.load(Relaxed))
            .finish()
    }
}

impl ArrayPq {
    /// An empty sparse-mode queue over records `0..n`.
    pub fn new(dist: Arc<DistanceMap>, n: usize) -> Self {
        Self::with_augmentation(dist, n, None)
    }

    pub fn with_augmentation(
        dist: Arc<DistanceMap>,
        n: usize,
        aug: Option<Arc<dyn Augmentation>>,
    ) -> Self {
        assert!(n <= dist.len());
        Self {
            dist,
            aug,
            flags: (0..n.div_ceil(64)).map(|_| AtomicU64::new(0)).collect(),
            n,
            queued: AtomicUsize::new(0),
            mode: QueueMode::Sparse,
            table: ScatterHashTable::for_universe(n, 0x5151),
            spare: ScatterHashTable::for_universe(n, 0xa3a3),
        }
    }

    pub fn mode(&self) -> QueueMode {
        self.mode
    }

    /// Switches representation. Entering sparse mode rebuilds the table from
    /// the flags; leaving it just stops scattering.
    pub fn set_mode(&mut self, mode: QueueMode) {
        if mode == self.mode {
            return;
        }
        if mode == QueueMode::Sparse {
            self.table.reset();
            let ids = self.flagged();
            ids.par_iter()
                .for_each(|&id| self.table.insert(id).expect("table holds every record"));
        }
        self.mode = mode;
    }

    #[inline]
    pub fn contains(&self, id: u32) -> bool {
        self.flags[id as usize / 64].load(Relaxed) & (1 << (id % 64)) != 0
    }

    /// Ids in the sparse table, in slot order (duplicates would show here).
    pub fn table_ids(&self) -> Vec<u32> {
        self.table.ids()
    }

    pub fn table(&self) -> &ScatterHashTable {
        &self.table
    }

    fn flagged(&self) -> Vec<u32> {
        let word_ids = |(w, word): (usize, &AtomicU64)| bits(word.load(Relaxed)).map(move |b| (w * 64 + b) as u32);
        if self.flags.len() < SEQ_BATCH {
            self.flags.iter().enumerate().flat_map(word_ids).collect()
        } else {
            self.flags.par_iter().enumerate().flat_map_iter(word_ids).collect()
        }
    }
}

fn bits(mut word: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if word == 0 {
            None
        } else {
            let b = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(b)
        }
    })
}

impl LabPq for ArrayPq {
    fn update(&self, id: u32) {
        let word = &self.flags[id as usize / 64];
        let bit = 1u64 << (id % 64);
        if word.load(Relaxed) & bit != 0 {
            return;
        }
        if word.fetch_or(bit, Relaxed) & bit == 0 {
            self.queued.fetch_add(1, Relaxed);
            if self.mode == QueueMode::Sparse {
                self.table.insert(id).expect("table holds every record");
            }
        }
    }

    fn extract(&mut self, theta: Distance) -> Vec<u32> {
        let out = match self.mode {
            QueueMode::Dense => {
                let dist = &self.dist;
                self.flags
                    .par_iter()
                    .enumerate()
                    .flat_map_iter(|(w, word)| {
                        let cur = word.load(Relaxed);
                        let mut taken = 0u64;
                        let ids: Vec<u32> = bits(cur)
                            .map(|b| (w * 64 + b) as u32)
                            .filter(|&id| dist.get(id) <= theta)
                            .inspect(|&id| taken |= 1 << (id % 64))
                            .collect();
                        if taken != 0 {
                            word.store(cur & !taken, Relaxed);
                        }
                        ids
                    })
                    .collect::<Vec<u32>>()
            }
            QueueMode::Sparse => {
                let ids = self.table.ids();
                let dist = &self.dist;
                let below = |id: &u32| dist.get(*id) <= theta;
                self.spare.reset();
                let spare = &self.spare;
                let keep = |id: u32| spare.insert(id).expect("table holds every record");
                let mut out: Vec<u32>;
                if ids.len() < SEQ_BATCH {
                    let rest: Vec<u32>;
                    (out, rest) = ids.into_iter().partition(below);
                    rest.into_iter().for_each(keep);
                    out.sort_unstable();
                } else {
                    let rest: Vec<u32>;
                    (out, rest) = ids.into_par_iter().partition(below);
                    rest.into_par_iter().for_each(keep);
                    out.par_sort_unstable();
                }
                std::mem::swap(&mut self.table, &mut self.spare);
                for &id in &out {
                    self.flags[id as usize / 64].fetch_and(!(1 << (id % 64)), Relaxed);
                }
                out
            }
        };
        self.queued.fetch_sub(out.len(), Relaxed);
        out
    }

    fn len(&self) -> usize {
        self.queued.load(Relaxed)
    }

    fn min_key(&mut self) -> Distance {
        let ids = self.queued();
        ids.iter().map(|&id| self.dist.get(id)).min().unwrap_or(INF)
    }

    fn reduce(&mut self) -> Result<u64> {
        let aug = self
            .aug
            .clone()
            .ok_or_else(|| Error::Config("reduce on a queue without an augmentation".into()))?;
        let ids = self.queued();
        Ok(ids
            .par_iter()
            .map(|&id| aug.map(id, self.dist.get(id)))
            .reduce(|| aug.identity(), |a, b| aug.combine(a, b)))
    }

    fn queued(&mut self) -> Vec<u32> {
        match self.mode {
            QueueMode::Dense => self.flagged(),
            QueueMode::Sparse => {
                let mut ids = self.table.ids();
                if ids.len() < SEQ_BATCH {
                    ids.sort_unstable();
                } else {
                    ids.par_sort_unstable();
                }
                ids
            }
        }
    }

    fn distances(&self) -> &Arc<DistanceMap> {
        &self.dist
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labpq::MinKey;

    use std::collections::HashSet;

    fn queue(vals: &[u64], mode: QueueMode) -> ArrayPq {
        let mut q = ArrayPq::with_augmentation(
            Arc::new(DistanceMap::from_values(vals)),
            vals.len(),
            Some(Arc::new(MinKey)),
        );
        q.set_mode(mode);
        q
    }

    #[test]
    fn hand_filter_both_modes() {
        for mode in [QueueMode::Dense, QueueMode::Sparse] {
            let mut q = queue(&[5, 2, 9], mode);
            for id in 0..3 {
                q.update(id);
            }
            assert_eq!(q.extract(5), vec![0, 1]);
            assert!(q.contains(2));
            assert_eq!(q.len(), 1);
            assert!(q.extract(0).is_empty());
            assert_eq!(q.extract(INF), vec![2]);
        }
    }

    #[test]
    fn repeated_update_scatters_once() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
        let q = queue(&[1; 100], QueueMode::Sparse);
        pool.install(|| (0..10_000).into_par_iter().for_each(|i| q.update((i % 7) as u32)));
        let mut ids = q.table_ids();
        ids.sort_unstable();
        assert_eq!(ids, (0..7).collect::<Vec<_>>());
        assert_eq!(q.len(), 7);
    }

    #[test]
    fn distinct_updates_fill_table() {
        let q = queue(&[1; 5000], QueueMode::Sparse);
        (0..5000).into_par_iter().for_each(|i| q.update(i));
        assert_eq!(q.table().count(), 5000);
        let set: HashSet<u32> = q.table_ids().into_iter().collect();
        assert_eq!(set.len(), 5000);
    }

    #[test]
    fn mode_switch_keeps_contents() {
        let mut q = queue(&[4, 3, 2, 1, 0], QueueMode::Dense);
        q.update(1);
        q.update(3);
        q.set_mode(QueueMode::Sparse);
        let mut ids = q.table_ids();
        ids.sort_unstable();
        assert_eq!(ids, vec![1, 3]);
        q.update(4);
        assert_eq!(q.min_key(), 0);
        assert_eq!(q.reduce().unwrap(), 0);
        q.set_mode(QueueMode::Dense);
        assert_eq!(q.extract(3), vec![1, 3, 4]);
    }

    #[test]
    fn sparse_extract_keeps_the_rest_queued() {
        let vals: Vec<u64> = (0..3000).collect();
        let mut q = queue(&vals, QueueMode::Sparse);
        (0..3000).into_par_iter().for_each(|i| q.update(i));
        let out = q.extract(999);
        assert_eq!(out, (0..1000).collect::<Vec<_>>());
        assert_eq!(q.len(), 2000);
        assert_eq!(q.queued(), (1000..3000).collect::<Vec<_>>());
        q.update(5);
        assert_eq!(q.extract(1000), vec![5, 1000]);
    }
}
