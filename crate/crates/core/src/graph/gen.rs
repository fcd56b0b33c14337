use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EdgeList, VertexId, Weight, MAX_VERTICES};
use crate::error::{Error, Result};

/// Default weight range `[1, 2^18)`.
pub const DEFAULT_WEIGHT_LO: Weight = 1;
pub const DEFAULT_WEIGHT_HI: Weight = 1 << 18;

fn check_n(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        return Err(Error::Domain(format!("n = {n} exceeds {MAX_VERTICES}")));
    }
    Ok(())
}

/// `m` distinct undirected edges on `n` vertices, unit weights, no self-loops.
pub fn generate_random_graph(n: usize, m: usize, seed: u64) -> Result<EdgeList> {
    check_n(n)?;
    let max_pairs = (n as u128) * (n.saturating_sub(1) as u128) / 2;
    if m as u128 > max_pairs {
        return Err(Error::Infeasible(format!(
            "{m} undirected edges requested but n = {n} allows at most {max_pairs}"
        )));
    }
    let key = |u: u64, v: u64| if u < v { u * n as u64 + v } else { v * n as u64 + u };
    sample_pairs(n, m, seed, max_pairs, key)
}

/// `m` distinct directed arcs on `n` vertices, unit weights, no self-loops.
pub fn generate_random_digraph(n: usize, m: usize, seed: u64) -> Result<EdgeList> {
    check_n(n)?;
    let max_pairs = (n as u128) * (n.saturating_sub(1) as u128);
    if m as u128 > max_pairs {
        return Err(Error::Infeasible(format!(
            "{m} directed arcs requested but n = {n} allows at most {max_pairs}"
        )));
    }
    sample_pairs(n, m, seed, max_pairs, |u, v| u * n as u64 + v)
}

fn sample_pairs(
    n: usize,
    m: usize,
    seed: u64,
    max_pairs: u128,
    key: impl Fn(u64, u64) -> u64,
) -> Result<EdgeList> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if m == 0 {
        return Ok(EdgeList::new(n, Vec::new()));
    }
    // Dense requests: enumerate every pair and take a random prefix.
    if 2 * m as u128 > max_pairs {
        let mut seen = HashSet::new();
        let mut all = Vec::with_capacity(max_pairs as usize);
        for u in 0..n as u64 {
            for v in 0..n as u64 {
                if u != v && seen.insert(key(u, v)) {
                    all.push((u as VertexId, v as VertexId, 1));
                }
            }
        }
        all.shuffle(&mut rng);
        all.truncate(m);
        return Ok(EdgeList::new(n, all));
    }
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.gen_range(0..n as u64);
        let v = rng.gen_range(0..n as u64);
        if u != v && seen.insert(key(u, v)) {
            edges.push((u as VertexId, v as VertexId, 1));
        }
    }
    Ok(EdgeList::new(n, edges))
}

/// Redraws every weight i.i.d. uniform from `[lo, hi)`.
pub fn assign_uniform_weights(e: &EdgeList, seed: u64, lo: Weight, hi: Weight) -> Result<EdgeList> {
    if lo < 1 {
        return Err(Error::Domain(format!("weight lower bound {lo} must be >= 1")));
    }
    if lo >= hi {
        return Err(Error::Domain(format!("empty weight range [{lo}, {hi})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = e
        .edges
        .iter()
        .map(|&(u, v, _)| (u, v, rng.gen_range(lo..hi)))
        .collect();
    Ok(EdgeList::new(e.n, edges))
}

/// Path `0 - 1 - ... - (n-1)` with the given weight on every edge.
pub fn chain(n: usize, w: Weight) -> EdgeList {
    let edges = (1..n).map(|v| ((v - 1) as VertexId, v as VertexId, w)).collect();
    EdgeList::new(n, edges)
}

/// Vertex 0 joined to `leaves` leaves.
pub fn star(leaves: usize, w: Weight) -> EdgeList {
    let edges = (1..=leaves).map(|v| (0, v as VertexId, w)).collect();
    EdgeList::new(leaves + 1, edges)
}

/// `rows x cols` 4-neighbor grid with weights drawn from `[1, wmax]`.
pub fn grid(rows: usize, cols: usize, wmax: Weight, seed: u64) -> EdgeList {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = |r: usize, c: usize| (r * cols + c) as VertexId;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1), rng.gen_range(1..=wmax)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c), rng.gen_range(1..=wmax)));
            }
        }
    }
    EdgeList::new(rows * cols, edges)
}

/// Random graph whose edges are either weight 1 or weight `heavy`, half each.
/// Shortest paths prefer long chains of light edges over single heavy hops.
pub fn two_scale(n: usize, m: usize, heavy: Weight, seed: u64) -> Result<EdgeList> {
    let base = generate_random_graph(n, m, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let edges = base
        .edges
        .into_iter()
        .map(|(u, v, _)| (u, v, if rng.gen_bool(0.5) { 1 } else { heavy }))
        .collect();
    Ok(EdgeList::new(n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let a = generate_random_graph(4, 3, 7).unwrap();
        let b = generate_random_graph(4, 3, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn infeasible_request() {
        assert!(matches!(generate_random_graph(2, 5, 0), Err(Error::Infeasible(_))));
        assert!(matches!(generate_random_digraph(2, 3, 0), Err(Error::Infeasible(_))));
        assert!(generate_random_digraph(2, 2, 0).is_ok());
    }

    #[test]
    fn distinct_undirected_edges() {
        let e = generate_random_graph(1000, 5000, 1).unwrap();
        let set: HashSet<(u32, u32)> = e
            .edges
            .iter()
            .map(|&(u, v, _)| (u.min(v), u.max(v)))
            .collect();
        assert_eq!(set.len(), 5000);
        assert!(e.edges.iter().all(|&(u, v, _)| u != v));
    }

    #[test]
    fn dense_request_uses_enumeration() {
        let e = generate_random_graph(6, 15, 3).unwrap();
        let set: HashSet<(u32, u32)> = e.edges.iter().map(|&(u, v, _)| (u.min(v), u.max(v))).collect();
        assert_eq!(set.len(), 15);
    }

    #[test]
    fn default_weight_range() {
        let e = generate_random_graph(500, 3000, 9).unwrap();
        let w = assign_uniform_weights(&e, 1, DEFAULT_WEIGHT_LO, DEFAULT_WEIGHT_HI).unwrap();
        assert!(w.edges.iter().all(|&(_, _, w)| (1..262_144).contains(&w)));
        let again = assign_uniform_weights(&e, 1, DEFAULT_WEIGHT_LO, DEFAULT_WEIGHT_HI).unwrap();
        assert_eq!(w, again);
    }

    #[test]
    fn degenerate_range_gives_unit_weights() {
        let e = generate_random_graph(50, 100, 2).unwrap();
        let w = assign_uniform_weights(&e, 3, 1, 2).unwrap();
        assert!(w.edges.iter().all(|&(_, _, w)| w == 1));
    }

    #[test]
    fn weight_lower_bound_enforced() {
        let e = chain(3, 1);
        assert!(matches!(assign_uniform_weights(&e, 0, 0, 5), Err(Error::Domain(_))));
        assert!(matches!(assign_uniform_weights(&e, 0, 5, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn weights_pass_chi_square_uniformity() {
        // 10^5 draws into 16 equal buckets over [1, 2^18).
        let n = 100_000;
        let e = EdgeList::new(2, vec![(0, 1, 1); n]);
        let w = assign_uniform_weights(&e, 2024, DEFAULT_WEIGHT_LO, DEFAULT_WEIGHT_HI).unwrap();
        let width = (DEFAULT_WEIGHT_HI - DEFAULT_WEIGHT_LO) as f64 / 16.0;
        let mut counts = [0usize; 16];
        for &(_, _, x) in &w.edges {
            let b = (((x - DEFAULT_WEIGHT_LO) as f64) / width) as usize;
            counts[b.min(15)] += 1;
        }
        let expected = n as f64 / 16.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // Upper 0.001 quantile of chi-square with 15 degrees of freedom.
        assert!(chi2 < 37.697, "chi2 = {chi2}");
    }
}
