#![allow(dead_code)]

use parsssp::graph::{
    assign_uniform_weights, build_csr, generate_random_digraph, generate_random_graph, DEFAULT_WEIGHT_HI,
    DEFAULT_WEIGHT_LO,
};
use parsssp::Graph;

/// Random graph with weights uniform in `[1, 2^18)`.
pub fn random_graph(n: usize, m: usize, seed: u64, directed: bool) -> Graph {
    let e = if directed {
        generate_random_digraph(n, m, seed).unwrap()
    } else {
        generate_random_graph(n, m, seed).unwrap()
    };
    let e = assign_uniform_weights(&e, seed.wrapping_add(1), DEFAULT_WEIGHT_LO, DEFAULT_WEIGHT_HI).unwrap();
    build_csr(&e, directed).unwrap()
}
