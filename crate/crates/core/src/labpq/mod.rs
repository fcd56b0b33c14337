//! Lazy-batched priority queues.
//!
//! A queue holds a set of record ids whose keys live in a shared
//! [`DistanceMap`]. `update` may run concurrently from any number of workers
//! and only has to take effect by the next `extract`; `extract`, `reduce` and
//! the other `&mut self` operations run exclusively.

mod array;
mod reference;
mod scatter;
mod tournament;

pub use array::{ArrayPq, QueueMode};
pub use reference::NaivePq;
pub use scatter::{ScatterHashTable, LOAD_FACTOR, MIN_SIZE, SAMPLE_RATE};
pub use tournament::{TournamentTree, WorkCounters};

use std::sync::Arc;

use crate::dist::{Distance, DistanceMap, INF};
use crate::error::Result;

/// The lazy-batched priority queue interface.
pub trait LabPq: Send + Sync {
    /// Inserts `id` if absent and records that its key may have changed.
    fn update(&self, id: u32);

    /// Removes and returns every queued id whose key is at most `theta`,
    /// in ascending id order.
    fn extract(&mut self, theta: Distance) -> Vec<u32>;

    /// Number of queued ids.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Smallest key among queued ids, [`INF`] when empty.
    fn min_key(&mut self) -> Distance;

    /// Fold of the configured augmentation over queued records.
    fn reduce(&mut self) -> Result<u64>;

    /// Queued ids in ascending order, without removing them.
    fn queued(&mut self) -> Vec<u32>;

    fn distances(&self) -> &Arc<DistanceMap>;
}

/// A commutative monoid over per-record values, folded by [`LabPq::reduce`].
/// Values are `u64` so they can be cached in atomic tree nodes.
pub trait Augmentation: Send + Sync {
    fn identity(&self) -> u64;
    fn map(&self, id: u32, key: Distance) -> u64;
    fn combine(&self, a: u64, b: u64) -> u64;
}

/// `min` over keys.
#[derive(Clone, Copy, Debug, Default)]
pub struct MinKey;

impl Augmentation for MinKey {
    fn identity(&self) -> u64 {
        INF
    }

    fn map(&self, _id: u32, key: Distance) -> u64 {
        key
    }

    fn combine(&self, a: u64, b: u64) -> u64 {
        a.min(b)
    }
}

/// `min` over `key + value[id]`, saturating at [`INF`]. With the per-vertex
/// radius as value this yields the radius-stepping threshold.
#[derive(Clone, Debug)]
pub struct MinKeyPlusValue {
    values: Vec<u64>,
}

impl MinKeyPlusValue {
    pub fn new(values: Vec<u64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

impl Augmentation for MinKeyPlusValue {
    fn identity(&self) -> u64 {
        INF
    }

    fn map(&self, id: u32, key: Distance) -> u64 {
        key.saturating_add(self.values[id as usize])
    }

    fn combine(&self, a: u64, b: u64) -> u64 {
        a.min(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn monoid_laws(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let m = MinKeyPlusValue::new(vec![]);
            prop_assert_eq!(m.combine(a, m.identity()), a);
            prop_assert_eq!(m.combine(a, b), m.combine(b, a));
            prop_assert_eq!(m.combine(m.combine(a, b), c), m.combine(a, m.combine(b, c)));
        }
    }

    #[test]
    fn key_plus_value_saturates() {
        let m = MinKeyPlusValue::new(vec![5, INF]);
        assert_eq!(m.map(0, 3), 8);
        assert_eq!(m.map(1, 3), INF);
        assert_eq!(m.map(0, INF), INF);
    }
}
