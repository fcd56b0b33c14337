//! Weighted graphs in compressed-sparse-row form.
//!
//! Vertex ids are dense `0..n`. Weights are `u32` and at least 1; distances
//! are `u64`, which cannot overflow for `n < 2^31` and `L < 2^32`.

mod gen;
mod io;

pub use gen::{
    assign_uniform_weights, chain, generate_random_digraph, generate_random_graph, grid, star,
    two_scale, DEFAULT_WEIGHT_HI, DEFAULT_WEIGHT_LO,
};
pub use io::{
    load_binary, load_graph, parse_edge_list, read_edge_list, save_binary, save_edge_list, BINARY_MAGIC,
};

use std::hash::{DefaultHasher, Hash, Hasher};

use rayon::prelude::*;

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type Weight = u32;

/// Largest vertex count accepted by [`build_csr`].
pub const MAX_VERTICES: usize = 1 << 31;

/// A plain list of weighted edges over `n` vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId, Weight)>,
}

impl EdgeList {
    pub fn new(n: usize, edges: Vec<(VertexId, VertexId, Weight)>) -> Self {
        Self { n, edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Checks id ranges and the minimum-weight normalization.
    pub fn validate(&self) -> Result<()> {
        if self.n > MAX_VERTICES {
            return Err(Error::Domain(format!(
                "n = {} exceeds the supported maximum {MAX_VERTICES}",
                self.n
            )));
        }
        for (i, &(u, v, w)) in self.edges.iter().enumerate() {
            if u as usize >= self.n || v as usize >= self.n {
                return Err(Error::Domain(format!(
                    "edge {i} ({u}, {v}) has an endpoint outside [0, {})",
                    self.n
                )));
            }
            if w == 0 {
                return Err(Error::Domain(format!(
                    "edge {i} ({u}, {v}) has weight 0; weights must be >= 1"
                )));
            }
        }
        Ok(())
    }
}

/// Immutable CSR graph. Undirected graphs store both arc directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<u64>,
    targets: Vec<VertexId>,
    weights: Vec<Weight>,
    directed: bool,
    max_weight: Weight,
}

impl Graph {
    /// Assembles a graph from raw CSR arrays, checking the structural invariants.
    pub fn from_parts(
        offsets: Vec<u64>,
        targets: Vec<VertexId>,
        weights: Vec<Weight>,
        directed: bool,
    ) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::Format("offsets must have length n + 1".into()));
        }
        let n = offsets.len() - 1;
        let m = targets.len();
        if weights.len() != m {
            return Err(Error::Format(format!(
                "{} targets but {} weights",
                m,
                weights.len()
            )));
        }
        if offsets[0] != 0 || offsets[n] != m as u64 {
            return Err(Error::Format(format!(
                "offsets must start at 0 and end at m = {m}"
            )));
        }
        if offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Format("offsets are not nondecreasing".into()));
        }
        if let Some(t) = targets.iter().find(|&&t| t as usize >= n) {
            return Err(Error::Format(format!("target {t} out of range for n = {n}")));
        }
        if weights.contains(&0) {
            return Err(Error::Format("zero edge weight".into()));
        }
        let max_weight = weights.iter().copied().max().unwrap_or(0);
        Ok(Self {
            offsets,
            targets,
            weights,
            directed,
            max_weight,
        })
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of stored arcs (each undirected edge counts twice).
    pub fn m(&self) -> usize {
        self.targets.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// `L`, the largest stored weight (0 for an edgeless graph).
    pub fn max_weight(&self) -> Weight {
        self.max_weight
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn targets(&self) -> &[VertexId] {
        &self.targets
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    #[inline]
    pub fn degree(&self, u: VertexId) -> usize {
        let u = u as usize;
        (self.offsets[u + 1] - self.offsets[u]) as usize
    }

    /// Out-neighbors of `u` with their arc weights, sorted by target id.
    #[inline]
    pub fn neighbors(&self, u: VertexId) -> (&[VertexId], &[Weight]) {
        let u = u as usize;
        let lo = self.offsets[u] as usize;
        let hi = self.offsets[u + 1] as usize;
        (&self.targets[lo..hi], &self.weights[lo..hi])
    }

    /// Iterates `(target, weight)` pairs of `u`.
    pub fn arcs(&self, u: VertexId) -> impl Iterator<Item = (VertexId, Weight)> + '_ {
        let (t, w) = self.neighbors(u);
        t.iter().copied().zip(w.iter().copied())
    }

    /// A stable 64-bit fingerprint of the CSR arrays, used to tie run
    /// statistics to the graph they came from.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.directed.hash(&mut h);
        self.offsets.hash(&mut h);
        self.targets.hash(&mut h);
        self.weights.hash(&mut h);
        h.finish()
    }
}

/// Builds the canonical CSR form: self-loops dropped, parallel arcs merged
/// keeping the smallest weight, undirected input symmetrized, and every
/// neighbor list sorted by target id.
pub fn build_csr(e: &EdgeList, directed: bool) -> Result<Graph> {
    e.validate()?;
    let n = e.n;
    let mut arcs: Vec<(VertexId, VertexId, Weight)> =
        Vec::with_capacity(if directed { e.len() } else { 2 * e.len() });
    for &(u, v, w) in &e.edges {
        if u == v {
            continue;
        }
        arcs.push((u, v, w));
        if !directed {
            arcs.push((v, u, w));
        }
    }
    arcs.par_sort_unstable();
    arcs.dedup_by_key(|a| (a.0, a.1));

    let mut offsets = vec![0u64; n + 1];
    for &(u, _, _) in &arcs {
        offsets[u as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let (targets, weights): (Vec<_>, Vec<_>) = arcs.into_iter().map(|(_, v, w)| (v, w)).unzip();
    Graph::from_parts(offsets, targets, weights, directed)
}
