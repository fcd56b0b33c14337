//! Resizable scatter table for sparse frontiers.
//!
//! One physical array is allocated up front. Inserts go to the live region
//! `[offset, tail)`, starting at a hashed slot and probing linearly. A sampled
//! counter estimates how full the region is; once the estimate passes the
//! load factor the live region becomes `[tail, 2 * tail)`. Nothing is copied:
//! earlier regions keep their entries and are scanned along with the live one.

use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering::Relaxed};

use rayon::prelude::*;

use crate::error::{Error, Result};

const EMPTY: u32 = u32::MAX;

/// Probability that an insert bumps the size estimate.
pub const SAMPLE_RATE: f64 = 1.0 / 64.0;
const SAMPLE_SHIFT: u32 = 6;
/// Estimated fill fraction of the live region that triggers a resize.
pub const LOAD_FACTOR: f64 = 0.5;
/// Size of the first region.
pub const MIN_SIZE: usize = 1024;
/// Scans over fewer slots than this stay on the calling thread.
const SEQ_SLOTS: usize = 1 << 14;

#[inline]
fn mix(mut x: u64) -> u64 {
    // splitmix64 finalizer
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

#[derive(Debug)]
pub struct ScatterHashTable {
    slots: Vec<AtomicU32>,
    offset: AtomicUsize,
    sampled: AtomicUsize,
    min_size: usize,
    salt: u64,
}

impl ScatterHashTable {
    /// A table able to hold `n` distinct ids.
    pub fn for_universe(n: usize, salt: u64) -> Self {
        Self::with_min_size(n, MIN_SIZE, salt)
    }

    pub fn with_min_size(n: usize, min_size: usize, salt: u64) -> Self {
        assert!(min_size.is_power_of_two());
        let capacity = 4 * n.next_power_of_two().max(min_size);
        Self {
            slots: (0..capacity).map(|_| AtomicU32::new(EMPTY)).collect(),
            offset: AtomicUsize::new(0),
            sampled: AtomicUsize::new(0),
            min_size,
            salt,
        }
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    fn region_of(&self, offset: usize) -> (usize, usize) {
        if offset == 0 {
            (0, self.min_size)
        } else {
            (offset, 2 * offset)
        }
    }

    /// The live region `[offset, tail)`.
    pub fn region(&self) -> (usize, usize) {
        self.region_of(self.offset.load(Relaxed))
    }

    /// Sampled estimate of the number of ids in the live region.
    pub fn estimated_size(&self) -> usize {
        self.sampled.load(Relaxed) << SAMPLE_SHIFT
    }

    /// Places `id` into an empty slot of the live region. The caller must
    /// guarantee `id` is not already present.
    pub fn insert(&self, id: u32) -> Result<()> {
        debug_assert_ne!(id, EMPTY);
        let h = mix(id as u64 ^ self.salt);
        loop {
            let off = self.offset.load(Relaxed);
            let (lo, hi) = self.region_of(off);
            let size = hi - lo;
            let mut slot = lo + (h as usize & (size - 1));
            for _ in 0..size {
                if self.slots[slot]
                    .compare_exchange(EMPTY, id, Relaxed, Relaxed)
                    .is_ok()
                {
                    self.increment_size(h, off, size);
                    return Ok(());
                }
                slot = if slot + 1 == hi { lo } else { slot + 1 };
            }
            // Region full despite the estimate: move on.
            if !self.advance(off) && self.offset.load(Relaxed) == off {
                return Err(Error::Capacity(self.capacity()));
            }
        }
    }

    fn increment_size(&self, h: u64, off: usize, size: usize) {
        if (h >> (64 - SAMPLE_SHIFT)) == 0 {
            let est = (self.sampled.fetch_add(1, Relaxed) + 1) << SAMPLE_SHIFT;
            if est as f64 > LOAD_FACTOR * size as f64 {
                self.advance(off);
            }
        }
    }

    /// Moves the live region from the one starting at `off` to the next.
    fn advance(&self, off: usize) -> bool {
        let (_, tail) = self.region_of(off);
        if 2 * tail > self.slots.len() {
            return false;
        }
        if self.offset.compare_exchange(off, tail, Relaxed, Relaxed).is_ok() {
            self.sampled.store(0, Relaxed);
        }
        true
    }

    /// Empties every region used since the last reset.
    pub fn reset(&mut self) {
        let (_, tail) = self.region();
        if tail < SEQ_SLOTS {
            self.slots[..tail].iter_mut().for_each(|s| *s.get_mut() = EMPTY);
        } else {
            self.slots[..tail].par_iter().for_each(|s| s.store(EMPTY, Relaxed));
        }
        self.offset.store(0, Relaxed);
        self.sampled.store(0, Relaxed);
    }

    /// Every stored id, in slot order.
    pub fn ids(&self) -> Vec<u32> {
        let (_, tail) = self.region();
        let live = self.slots[..tail].iter().map(|s| s.load(Relaxed));
        if tail < SEQ_SLOTS {
            live.filter(|&v| v != EMPTY).collect()
        } else {
            self.slots[..tail]
                .par_iter()
                .map(|s| s.load(Relaxed))
                .filter(|&v| v != EMPTY)
                .collect()
        }
    }

    pub fn count(&self) -> usize {
        let (_, tail) = self.region();
        self.slots[..tail].par_iter().filter(|s| s.load(Relaxed) != EMPTY).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use std::collections::HashSet;

    #[test]
    fn first_insert_lands_in_first_region() {
        let t = ScatterHashTable::for_universe(10, 1);
        t.insert(3).unwrap();
        assert_eq!(t.region(), (0, MIN_SIZE));
        assert_eq!(t.ids(), vec![3]);
    }

    #[test]
    fn resize_moves_offset_to_old_tail() {
        let t = ScatterHashTable::with_min_size(4096, 64, 7);
        let mut regions = vec![t.region()];
        for id in 0..600 {
            t.insert(id).unwrap();
            let r = t.region();
            if *regions.last().unwrap() != r {
                assert_eq!(r.0, regions.last().unwrap().1);
                assert_eq!(r.1, 2 * r.0);
                regions.push(r);
            }
        }
        assert!(regions.len() >= 4, "{regions:?}");
        let got: HashSet<u32> = t.ids().into_iter().collect();
        assert_eq!(got, (0..600).collect());
        assert_eq!(t.count(), 600);
    }

    #[test]
    fn concurrent_inserts_lose_nothing() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
        let t = ScatterHashTable::with_min_size(100_000, 64, 3);
        pool.install(|| (0..100_000u32).into_par_iter().for_each(|id| t.insert(id).unwrap()));
        let mut got = t.ids();
        got.sort_unstable();
        assert_eq!(got, (0..100_000).collect::<Vec<_>>());
    }

    #[test]
    fn reset_clears() {
        let mut t = ScatterHashTable::with_min_size(5000, 64, 3);
        for id in 0..3000 {
            t.insert(id).unwrap();
        }
        t.reset();
        assert_eq!(t.region(), (0, 64));
        assert!(t.ids().is_empty());
        t.insert(42).unwrap();
        assert_eq!(t.ids(), vec![42]);
    }

    #[test]
    fn full_table_reports_capacity() {
        // Capacity 4 * 64 = 256 slots; regions top out at [128, 256).
        let t = ScatterHashTable::with_min_size(8, 64, 1);
        let mut err = None;
        for id in 0..300 {
            if let Err(e) = t.insert(id) {
                err = Some(e);
                break;
            }
        }
        assert!(matches!(err, Some(Error::Capacity(256))));
    }
}
