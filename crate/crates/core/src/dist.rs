//! Tentative distance array shared between the stepping loop and the queues.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

pub type Distance = u64;

/// Unreachable sentinel; the identity of `write_min`.
pub const INF: Distance = u64::MAX;

/// Atomically lowers `cell` to `v` if `v` is smaller. Returns `true` iff this
/// call strictly decreased the cell.
#[inline]
pub fn write_min(cell: &AtomicU64, v: Distance) -> bool {
    let mut cur = cell.load(Ordering::Relaxed);
    while v < cur {
        match cell.compare_exchange_weak(cur, v, Ordering::Relaxed, Ordering::Relaxed) {
            Ok(_) => return true,
            Err(seen) => cur = seen,
        }
    }
    false
}

/// Per-vertex tentative distances. Every cell only ever decreases through
/// [`DistanceMap::write_min`]; [`DistanceMap::set`] exists for initialization
/// and for tests that drive the queues directly.
#[derive(Debug)]
pub struct DistanceMap {
    cells: Vec<AtomicU64>,
}

impl DistanceMap {
    pub fn new(n: usize) -> Self {
        Self {
            cells: (0..n).map(|_| AtomicU64::new(INF)).collect(),
        }
    }

    pub fn from_values(values: &[Distance]) -> Self {
        Self {
            cells: values.iter().map(|&d| AtomicU64::new(d)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn get(&self, id: u32) -> Distance {
        self.cells[id as usize].load(Ordering::Relaxed)
    }

    #[inline]
    pub fn set(&self, id: u32, d: Distance) {
        self.cells[id as usize].store(d, Ordering::Relaxed)
    }

    #[inline]
    pub fn write_min(&self, id: u32, d: Distance) -> bool {
        write_min(&self.cells[id as usize], d)
    }

    pub fn reset(&self) {
        self.cells.par_iter().for_each(|c| c.store(INF, Ordering::Relaxed));
    }

    pub fn to_vec(&self) -> Vec<Distance> {
        self.cells.par_iter().map(|c| c.load(Ordering::Relaxed)).collect()
    }
}

/// Order-independent fold of a distance vector: wrapping sum mod 2^64.
pub fn checksum(dist: &[Distance]) -> u64 {
    dist.par_iter().fold(|| 0u64, |a, &d| a.wrapping_add(d)).reduce(|| 0, u64::wrapping_add)
}

#[cfg(test)]
mod tests {
    use super::*;

    use std::sync::atomic::AtomicUsize;

    #[test]
    fn lowers_and_reports() {
        let c = AtomicU64::new(5);
        assert!(write_min(&c, 3));
        assert_eq!(c.load(Ordering::Relaxed), 3);
        assert!(!write_min(&c, 5));
        assert!(!write_min(&c, 3));
        assert_eq!(c.load(Ordering::Relaxed), 3);
    }

    #[test]
    fn concurrent_write_min_reaches_minimum() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
        for round in 0..50u64 {
            let cell = AtomicU64::new(INF);
            let wins = AtomicUsize::new(0);
            let values: Vec<u64> = (0..1000u64).map(|i| (i * 7919 + round * 31) % 997 + 1).collect();
            pool.install(|| {
                values.par_iter().for_each(|&v| {
                    if write_min(&cell, v) {
                        wins.fetch_add(1, Ordering::Relaxed);
                    }
                })
            });
            assert_eq!(cell.load(Ordering::Relaxed), *values.iter().min().unwrap());
            let w = wins.load(Ordering::Relaxed);
            // Each success strictly lowers the cell, so there can be at most one per distinct value.
            let distinct = values.iter().collect::<std::collections::HashSet<_>>().len();
            assert!(w >= 1 && w <= distinct);
        }
    }

    #[test]
    fn checksum_wraps() {
        assert_eq!(checksum(&[INF, 1]), 0);
        assert_eq!(checksum(&[1, 2, 3]), 6);
    }
}
