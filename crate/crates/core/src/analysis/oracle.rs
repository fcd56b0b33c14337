use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::dist::{Distance, INF};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Exact distances plus the fewest hops among shortest paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub graph: u64,
    pub source: VertexId,
    pub dist: Vec<Distance>,
    /// `u32::MAX` for unreachable vertices.
    pub hops: Vec<u32>,
    /// Largest hop count over reachable vertices: the shortest-path tree depth.
    pub k_n: u32,
}

/// Sequential binary-heap Dijkstra over `(distance, hops)` keys.
pub fn dijkstra_oracle(g: &Graph, source: VertexId) -> Result<OracleResult> {
    let n = g.n();
    if source as usize >= n {
        return Err(Error::Domain(format!("source {source} outside 0..{n}")));
    }
    let mut dist = vec![INF; n];
    let mut hops = vec![u32::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source as usize] = 0;
    hops[source as usize] = 0;
    heap.push(Reverse((0u64, 0u32, source)));
    while let Some(Reverse((d, h, u))) = heap.pop() {
        if done[u as usize] {
            continue;
        }
        done[u as usize] = true;
        for (v, w) in g.arcs(u) {
            let key = (d + w as Distance, h + 1);
            if key < (dist[v as usize], hops[v as usize]) {
                dist[v as usize] = key.0;
                hops[v as usize] = key.1;
                heap.push(Reverse((key.0, key.1, v)));
            }
        }
    }
    let k_n = hops.iter().copied().filter(|&h| h != u32::MAX).max().unwrap_or(0);
    Ok(OracleResult { graph: g.fingerprint(), source, dist, hops, k_n })
}

/// n rounds of full relaxation. Quadratic; for tests on small graphs.
pub fn bellman_ford_oracle(g: &Graph, source: VertexId) -> Vec<Distance> {
    let n = g.n();
    let mut dist = vec![INF; n];
    dist[source as usize] = 0;
    for _ in 0..n {
        let mut changed = false;
        for u in 0..n as VertexId {
            let du = dist[u as usize];
            if du == INF {
                continue;
            }
            for (v, w) in g.arcs(u) {
                if du + (w as Distance) < dist[v as usize] {
                    dist[v as usize] = du + w as Distance;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// Settles the `rho` nearest vertices of `v` in `(distance, hops, id)` order,
/// `v` itself first. Returns the largest hop count among them and the
/// distance of the `rho`-th, or [`INF`] when fewer are reachable.
pub(crate) fn truncated_search(g: &Graph, v: VertexId, rho: usize) -> (u32, Distance) {
    let mut best: HashMap<VertexId, (Distance, u32)> = HashMap::new();
    let mut settled: HashMap<VertexId, ()> = HashMap::new();
    let mut heap = BinaryHeap::new();
    best.insert(v, (0, 0));
    heap.push(Reverse((0u64, 0u32, v)));
    let mut k = 0;
    while let Some(Reverse((d, h, u))) = heap.pop() {
        if settled.insert(u, ()).is_some() {
            continue;
        }
        k = k.max(h);
        if settled.len() == rho {
            return (k, d);
        }
        for (x, w) in g.arcs(u) {
            let key = (d + w as Distance, h + 1);
            if settled.contains_key(&x) {
                continue;
            }
            let cur = best.entry(x).or_insert((INF, u32::MAX));
            if key < *cur {
                *cur = key;
                heap.push(Reverse((key.0, key.1, x)));
            }
        }
    }
    (k, INF)
}
