//! Edge relaxation for one extracted vertex.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::dist::{Distance, DistanceMap, INF};
use crate::graph::{Graph, VertexId};
use crate::labpq::LabPq;

/// Per-round relaxation counts, summed across workers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    /// Arcs looked at.
    pub attempted: u64,
    /// `write_min` calls that lowered a distance.
    pub succeeded: u64,
    /// Calls to `LabPq::update`.
    pub updates: u64,
    /// Vertices whose out-arcs were scanned.
    pub expanded: u64,
    /// A lowered distance landed at or below the round threshold.
    pub hit: bool,
}

impl Tally {
    pub fn merge(self, o: Tally) -> Tally {
        Tally {
            attempted: self.attempted + o.attempted,
            succeeded: self.succeeded + o.succeeded,
            updates: self.updates + o.updates,
            expanded: self.expanded + o.expanded,
            hit: self.hit || o.hit,
        }
    }
}

/// Lowers `δ[u]` to the best value offered by its in-neighbors. Only valid
/// on undirected graphs, where out-arcs double as in-arcs.
fn pull(g: &Graph, u: VertexId, dist: &DistanceMap) {
    let best = g
        .arcs(u)
        .map(|(w, wt)| dist.get(w).saturating_add(wt as Distance))
        .min()
        .unwrap_or(INF);
    if best < dist.get(u) {
        dist.write_min(u, best);
    }
}

/// Relaxes every out-arc of `u`, queueing each target whose distance drops.
/// With `bidirectional` on an undirected graph, `u` first pulls from its
/// neighbors.
pub fn relax_neighbors<Q: LabPq + ?Sized>(
    g: &Graph,
    u: VertexId,
    dist: &DistanceMap,
    q: &Q,
    theta: Distance,
    bidirectional: bool,
) -> Tally {
    if bidirectional && !g.is_directed() {
        pull(g, u, dist);
    }
    let du = dist.get(u);
    let mut t = Tally { expanded: 1, ..Tally::default() };
    let (targets, weights) = g.neighbors(u);
    for (&v, &w) in targets.iter().zip(weights) {
        t.attempted += 1;
        let nd = du.saturating_add(w as Distance);
        if dist.write_min(v, nd) {
            t.succeeded += 1;
            t.updates += 1;
            t.hit |= nd <= theta;
            q.update(v);
        }
    }
    t
}

/// Runs a bounded Dijkstra from `u` in a worker-local heap.
///
/// Every lowered vertex is queued in the shared queue. It is also expanded
/// locally while its distance is within `theta` and fewer than `budget`
/// vertices have been touched. A budget of 1 reduces to [`relax_neighbors`].
pub fn local_bfs_neighborhood<Q: LabPq + ?Sized>(
    g: &Graph,
    u: VertexId,
    dist: &DistanceMap,
    q: &Q,
    theta: Distance,
    budget: usize,
    bidirectional: bool,
) -> Tally {
    if bidirectional && !g.is_directed() {
        pull(g, u, dist);
    }
    let mut t = Tally::default();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((dist.get(u), u)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if dist.get(x) < d {
            // Someone else lowered it and owns it now.
            continue;
        }
        t.expanded += 1;
        let (targets, weights) = g.neighbors(x);
        for (&v, &w) in targets.iter().zip(weights) {
            t.attempted += 1;
            let nd = d.saturating_add(w as Distance);
            if dist.write_min(v, nd) {
                t.succeeded += 1;
                t.updates += 1;
                t.hit |= nd <= theta;
                // Queued regardless: `v` may already sit in the shared queue
                // under its old key.
                q.update(v);
                if nd <= theta && (t.expanded as usize) + heap.len() < budget {
                    heap.push(Reverse((nd, v)));
                }
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_csr, chain, star, EdgeList};
    use crate::labpq::NaivePq;
    use std::sync::Arc;

    fn setup(g: &Graph, src: u32) -> (Arc<DistanceMap>, NaivePq) {
        let dist = Arc::new(DistanceMap::new(g.n()));
        dist.set(src, 0);
        let q = NaivePq::new(dist.clone(), None);
        (dist, q)
    }

    #[test]
    fn star_pull_repairs_center() {
        let g = build_csr(&star(4, 5), false).unwrap();
        let (dist, mut q) = setup(&g, 1);
        dist.set(0, 100);
        let t = relax_neighbors(&g, 0, &dist, &q, INF, true);
        assert_eq!(dist.get(0), 5);
        assert_eq!(dist.to_vec(), vec![5, 0, 10, 10, 10]);
        assert_eq!(t.succeeded, 3);
        assert_eq!(q.extract(INF), vec![2, 3, 4]);
    }

    #[test]
    fn no_pull_on_directed_graphs() {
        let g = build_csr(&EdgeList::new(2, vec![(1, 0, 3)]), true).unwrap();
        let (dist, q) = setup(&g, 1);
        relax_neighbors(&g, 0, &dist, &q, INF, true);
        assert_eq!(dist.get(0), INF);
    }

    #[test]
    fn chain_fusion_settles_within_budget() {
        let g = build_csr(&chain(10, 1), false).unwrap();
        let (dist, mut q) = setup(&g, 0);
        let t = local_bfs_neighborhood(&g, 0, &dist, &q, 5, 4096, false);
        assert_eq!(&dist.to_vec()[..7], &[0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(dist.get(7), INF);
        // Vertex 6 exceeded the threshold and was not expanded.
        assert_eq!(q.extract(INF), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(t.updates, 6);
        assert_eq!(t.expanded, 6);
    }

    #[test]
    fn budget_one_matches_plain_relaxation() {
        let g = build_csr(&chain(10, 1), false).unwrap();
        let (d1, mut q1) = setup(&g, 0);
        let (d2, mut q2) = setup(&g, 0);
        let a = local_bfs_neighborhood(&g, 0, &d1, &q1, INF, 1, false);
        let b = relax_neighbors(&g, 0, &d2, &q2, INF, false);
        assert_eq!(a, b);
        assert_eq!(d1.to_vec(), d2.to_vec());
        assert_eq!(q1.extract(INF), q2.extract(INF));
    }

    #[test]
    fn budget_caps_local_work() {
        let g = build_csr(&chain(100, 1), false).unwrap();
        let (dist, mut q) = setup(&g, 0);
        let t = local_bfs_neighborhood(&g, 0, &dist, &q, INF, 10, false);
        assert_eq!(t.expanded, 10);
        assert_eq!(q.extract(INF), (1..=10).collect::<Vec<_>>());
    }
}
