use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use super::{Augmentation, LabPq};
use crate::dist::{Distance, DistanceMap, INF};
use crate::error::{Error, Result};

/// Reference queue: an ordered id set filtered linearly. Used as the oracle
/// the real backends are checked against.
pub struct NaivePq {
    dist: Arc<DistanceMap>,
    aug: Option<Arc<dyn Augmentation>>,
    ids: Mutex<BTreeSet<u32>>,
}

impl NaivePq {
    pub fn new(dist: Arc<DistanceMap>, aug: Option<Arc<dyn Augmentation>>) -> Self {
        Self {
            dist,
            aug,
            ids: Mutex::new(BTreeSet::new()),
        }
    }
}

impl LabPq for NaivePq {
    fn update(&self, id: u32) {
        self.ids.lock().unwrap().insert(id);
    }

    fn extract(&mut self, theta: Distance) -> Vec<u32> {
        let ids = self.ids.get_mut().unwrap();
        let out: Vec<u32> = ids.iter().copied().filter(|&id| self.dist.get(id) <= theta).collect();
        for id in &out {
            ids.remove(id);
        }
        out
    }

    fn len(&self) -> usize {
        self.ids.lock().unwrap().len()
    }

    fn min_key(&mut self) -> Distance {
        let ids = self.ids.get_mut().unwrap();
        ids.iter().map(|&id| self.dist.get(id)).min().unwrap_or(INF)
    }

    fn reduce(&mut self) -> Result<u64> {
        let aug = self
            .aug
            .as_ref()
            .ok_or_else(|| Error::Config("reduce on a queue without an augmentation".into()))?;
        let ids = self.ids.get_mut().unwrap();
        Ok(ids
            .iter()
            .fold(aug.identity(), |acc, &id| aug.combine(acc, aug.map(id, self.dist.get(id)))))
    }

    fn queued(&mut self) -> Vec<u32> {
        self.ids.get_mut().unwrap().iter().copied().collect()
    }

    fn distances(&self) -> &Arc<DistanceMap> {
        &self.dist
    }
}
