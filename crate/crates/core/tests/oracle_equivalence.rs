mod common;

use proptest::prelude::*;

use parsssp::analysis::{bellman_ford_oracle, compute_r_rho_table, dijkstra_oracle};
use parsssp::graph::{build_csr, EdgeList};
use parsssp::stepping::ModeOverride;
use parsssp::{run_sssp, Backend, Policy, RunConfig};

fn arb_graph() -> impl Strategy<Value = (EdgeList, bool)> {
    (1usize..60, any::<bool>()).prop_flat_map(|(n, directed)| {
        let edge = (0..n as u32, 0..n as u32, 1u32..50);
        (proptest::collection::vec(edge, 0..4 * n), Just(directed))
            .prop_map(move |(edges, d)| (EdgeList::new(n, edges), d))
    })
}

fn policy(kind: u8, delta: u64, rho: usize, g: &parsssp::Graph) -> Policy {
    match kind % 7 {
        0 => Policy::Dijkstra,
        1 => Policy::BellmanFord,
        2 => Policy::Delta(delta),
        3 => Policy::DeltaStar(delta),
        4 => Policy::rho(rho),
        5 => Policy::rho_exact(rho),
        _ => Policy::radius(compute_r_rho_table(g, rho.min(g.n())).unwrap()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn every_policy_matches_dijkstra(
        (e, directed) in arb_graph(),
        src in any::<u32>(),
        kind in any::<u8>(),
        delta in 1u64..200,
        rho in 1usize..70,
        array in any::<bool>(),
        mode in 0u8..4,
        fusion in any::<bool>(),
        budget in 1usize..16,
        bidirectional in any::<bool>(),
    ) {
        let g = build_csr(&e, directed).unwrap();
        let src = src % g.n() as u32;
        let want = dijkstra_oracle(&g, src).unwrap();
        prop_assert_eq!(&want.dist, &bellman_ford_oracle(&g, src));
        let cfg = RunConfig {
            backend: if array { Backend::Array } else { Backend::Tree },
            mode: [ModeOverride::Auto, ModeOverride::Dense, ModeOverride::Sparse, ModeOverride::SuperSparse][mode as usize],
            fusion,
            fusion_budget: budget,
            bidirectional,
            ..RunConfig::default()
        };
        let p = policy(kind, delta, rho, &g);
        let out = run_sssp(&g, src, &p, &cfg).unwrap();
        prop_assert_eq!(&out.dist, &want.dist, "{} {:?}", p, cfg);
        prop_assert!(out.stats.max_extractions <= want.k_n.max(1));
    }
}

#[test]
fn repeated_runs_agree_across_thread_counts() {
    let g = common::random_graph(3000, 15_000, 77, false);
    let want = dijkstra_oracle(&g, 5).unwrap().dist;
    for threads in [1, 2, 8] {
        for p in [Policy::rho(64), Policy::DeltaStar(1 << 15), Policy::BellmanFord] {
            let cfg = RunConfig { threads: Some(threads), ..RunConfig::default() };
            assert_eq!(run_sssp(&g, 5, &p, &cfg).unwrap().dist, want, "{p} threads={threads}");
        }
    }
}
