use std::io::Write;
use std::path::Path;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use parsssp::analysis::{
    bound_report, compute_r_rho_table, dijkstra_oracle, estimate_k_rho, exact_k_rho, KRhoEstimate,
};
use parsssp::graph::{
    assign_uniform_weights, build_csr, generate_random_digraph, generate_random_graph, load_graph,
    save_binary, save_edge_list,
};
use parsssp::stepping::{AlgorithmKind, Policy, DEFAULT_RHO};
use parsssp::{checksum, run_sssp, Backend, Graph, RunConfig, VertexId, INF};

use crate::args::{
    AlgoArgs, BoundsArgs, Command, GenArgs, GraphArgs, GraphFormat, KrhoArgs, RunArgs, StatsArgs,
    VerifyArgs,
};
use crate::CliError;

/// Version of the JSON documents written by `krho` and `bounds`.
const SCHEMA_VERSION: u32 = 1;

pub const RUN_HEADER: &str =
    "source,repeat,algo,backend,threads,wall_ms,steps,substeps,relax_attempted,relax_succeeded,visited_v,visited_e,checksum";
pub const STATS_HEADER: &str = "step,mode,theta,visited_v,visited_e";

pub fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run(a),
        Command::Verify(a) => verify(a),
        Command::Stats(a) => stats(a),
        Command::Krho(a) => krho(a),
        Command::Bounds(a) => bounds(a),
    }
}

fn load(a: &GraphArgs) -> Result<Graph, CliError> {
    load_graph(&a.graph, a.directed)
        .map_err(|e| CliError::Io(format!("cannot load {}: {e}", a.graph.display())))
}

fn gen(a: GenArgs) -> Result<(), CliError> {
    let e = if a.directed {
        generate_random_digraph(a.n, a.m, a.seed)?
    } else {
        generate_random_graph(a.n, a.m, a.seed)?
    };
    let e = assign_uniform_weights(&e, a.seed.wrapping_add(1), a.wmin, a.wmax)?;
    let g = build_csr(&e, a.directed)?;
    match a.format {
        GraphFormat::Binary => save_binary(&g, &a.out)?,
        GraphFormat::Text => save_edge_list(&e, &a.out)?,
    }
    println!("n={} m={} arcs={} L={} directed={}", g.n(), e.edges.len(), g.m(), g.max_weight(), g.is_directed());
    Ok(())
}

fn policy(a: &AlgoArgs, g: &Graph) -> Result<Policy, CliError> {
    let kind = a.algo;
    if a.delta.is_some() && !kind.needs_delta() {
        return Err(CliError::Usage(format!("--delta does not apply to {kind}")));
    }
    if a.rho.is_some() && !kind.needs_rho() {
        return Err(CliError::Usage(format!("--rho does not apply to {kind}")));
    }
    let delta = || a.delta.ok_or_else(|| CliError::Usage(format!("--delta is required for {kind}")));
    Ok(match kind {
        AlgorithmKind::Dijkstra => Policy::Dijkstra,
        AlgorithmKind::BellmanFord => Policy::BellmanFord,
        AlgorithmKind::Delta => Policy::Delta(delta()?),
        AlgorithmKind::DeltaStar => Policy::DeltaStar(delta()?),
        AlgorithmKind::Rho => Policy::Rho { rho: a.rho.unwrap_or(DEFAULT_RHO), selector: a.selector },
        AlgorithmKind::Radius => {
            let rho = a.rho.ok_or_else(|| CliError::Usage("--rho is required for radius".into()))?;
            Policy::radius(compute_r_rho_table(g, rho.clamp(1, g.n()))?)
        }
    })
}

fn config(a: &AlgoArgs) -> RunConfig {
    RunConfig {
        backend: a.backend,
        mode: a.mode,
        fusion: !a.no_fusion,
        fusion_budget: a.fusion_budget,
        bidirectional: !a.no_bidirectional,
        seed: a.seed,
        ..RunConfig::default()
    }
}

/// Parses `0,5,7` or `random:<k>:<seed>` (k distinct vertices).
pub fn parse_sources(list: &str, n: usize) -> Result<Vec<VertexId>, CliError> {
    let bad = || CliError::Usage(format!("bad source list {list:?}"));
    let sources: Vec<VertexId> = if let Some(rest) = list.strip_prefix("random:") {
        let (k, seed) = rest.split_once(':').ok_or_else(bad)?;
        let k: usize = k.parse().map_err(|_| bad())?;
        let seed: u64 = seed.parse().map_err(|_| bad())?;
        if k == 0 || k > n {
            return Err(CliError::Usage(format!("cannot pick {k} distinct sources from {n} vertices")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample(&mut rng, n, k).into_iter().map(|v| v as VertexId).collect()
    } else {
        list.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if let Some(&s) = sources.iter().find(|&&s| s as usize >= n) {
        return Err(CliError::Usage(format!("source {s} outside 0..{n}")));
    }
    Ok(sources)
}

fn run(a: RunArgs) -> Result<(), CliError> {
    let g = load(&a.graph)?;
    let p = policy(&a.algo, &g)?;
    let cfg = config(&a.algo);
    let sources = parse_sources(&a.sources, g.n())?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{RUN_HEADER}")?;
    for &s in &sources {
        for rep in 0..a.repeats {
            let r = run_sssp(&g, s, &p, &cfg)?;
            let st = &r.stats;
            let visited_v: usize = st.rounds.iter().map(|x| x.visited_vertices).sum();
            let visited_e: u64 = st.rounds.iter().map(|x| x.visited_edges).sum();
            writeln!(
                out,
                "{s},{rep},{},{},{},{:.3},{},{},{},{},{visited_v},{visited_e},{:016x}",
                a.algo.algo,
                cfg.backend,
                rayon::current_num_threads(),
                st.wall_seconds * 1e3,
                st.steps,
                st.substeps,
                st.relaxations_attempted,
                st.relaxations_succeeded,
                checksum(&r.dist),
            )?;
        }
    }
    Ok(())
}

fn show(d: u64) -> String {
    if d == INF {
        "inf".into()
    } else {
        d.to_string()
    }
}

fn verify(a: VerifyArgs) -> Result<(), CliError> {
    let g = load(&a.graph)?;
    let p = policy(&a.algo, &g)?;
    let cfg = config(&a.algo);
    let sources = parse_sources(&a.sources, g.n())?;
    for &s in &sources {
        let mut got = run_sssp(&g, s, &p, &cfg)?.dist;
        if let Some(v) = a.corrupt_vertex {
            let cell = got.get_mut(v as usize).ok_or_else(|| CliError::Usage(format!("vertex {v} out of range")))?;
            *cell = if *cell == 0 { 1 } else { *cell - 1 };
        }
        let want = dijkstra_oracle(&g, s)?.dist;
        if let Some(v) = (0..g.n()).find(|&v| got[v] != want[v]) {
            return Err(CliError::Check(format!(
                "FAIL source {s}: vertex {v} got {} want {}",
                show(got[v]),
                show(want[v])
            )));
        }
    }
    println!("pass: {} matches dijkstra on {} source(s)", p, sources.len());
    Ok(())
}

fn stats(a: StatsArgs) -> Result<(), CliError> {
    let g = load(&a.graph)?;
    let p = policy(&a.algo, &g)?;
    let r = run_sssp(&g, a.source, &p, &config(&a.algo))?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{STATS_HEADER}")?;
    for round in &r.stats.rounds {
        writeln!(
            out,
            "{},{},{},{},{}",
            round.step,
            round.mode,
            show(round.theta),
            round.visited_vertices,
            round.visited_edges
        )?;
    }
    Ok(())
}

/// `{log n, √n, n / log n, n / 10, n}`, rounded up, clamped and deduplicated.
pub fn default_rho_grid(n: usize) -> Vec<usize> {
    let nf = n as f64;
    let log = nf.log2().max(1.0);
    let mut grid: Vec<usize> = [log, nf.sqrt(), nf / log, nf / 10.0, nf]
        .iter()
        .map(|&x| (x.ceil() as usize).clamp(1, n.max(1)))
        .collect();
    grid.sort_unstable();
    grid.dedup();
    grid
}

fn write_json(v: &serde_json::Value, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    match out {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn krho_entry(k: &KRhoEstimate) -> serde_json::Value {
    json!({ "rho": k.rho, "k_rho_hat": k.k_rho_hat, "samples": k.samples, "exact": k.exact })
}

fn krho(a: KrhoArgs) -> Result<(), CliError> {
    let g = load(&a.graph)?;
    let grid = if a.rho.is_empty() { default_rho_grid(g.n()) } else { a.rho.clone() };
    let estimates = grid
        .iter()
        .map(|&rho| if a.exact { exact_k_rho(&g, rho) } else { estimate_k_rho(&g, rho, a.samples, a.seed) })
        .collect::<Result<Vec<_>, _>>()?;
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "graph": format!("{:016x}", g.fingerprint()),
        "n": g.n(),
        "samples": if a.exact { g.n() } else { a.samples },
        "seed": a.seed,
        "estimates": estimates.iter().map(krho_entry).collect::<Vec<_>>(),
    });
    write_json(&doc, a.out.as_deref())
}

fn bounds(a: BoundsArgs) -> Result<(), CliError> {
    let g = load(&a.graph)?;
    if a.source as usize >= g.n() {
        return Err(CliError::Usage(format!("source {} outside 0..{}", a.source, g.n())));
    }
    let delta = a.delta.unwrap_or(g.max_weight() as u64).max(1);
    let rho = a.rho.unwrap_or((g.n() as f64).sqrt().ceil() as usize).clamp(1, g.n());
    let oracle = dijkstra_oracle(&g, a.source)?;
    let krho = if g.n() <= a.exact_limit {
        exact_k_rho(&g, rho)?
    } else {
        estimate_k_rho(&g, rho, a.samples, a.seed)?
    };
    let cfg = RunConfig { backend: Backend::Tree, ..RunConfig::default() };
    let policies = [Policy::BellmanFord, Policy::Dijkstra, Policy::DeltaStar(delta), Policy::rho_exact(rho)];
    let runs = policies
        .iter()
        .map(|p| run_sssp(&g, a.source, p, &cfg).map(|r| r.stats))
        .collect::<Result<Vec<_>, _>>()?;
    let report = bound_report(&g, &runs, &oracle, std::slice::from_ref(&krho))?;
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "k_n": oracle.k_n,
        "k_rho": krho_entry(&krho),
        "all_pass": report.all_pass(),
        "checks": report.checks,
    });
    write_json(&doc, a.out.as_deref())?;
    if !report.all_pass() {
        let failed: Vec<&str> = report.failures().map(|c| c.check.as_str()).collect();
        return Err(CliError::Check(format!("bound checks failed: {}", failed.join(", "))));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_sources() {
        assert_eq!(parse_sources("0, 4,2", 5).unwrap(), vec![0, 4, 2]);
        assert!(matches!(parse_sources("5", 5), Err(CliError::Usage(_))));
        assert!(matches!(parse_sources("a", 5), Err(CliError::Usage(_))));
    }

    #[test]
    fn random_sources_are_distinct_and_seeded() {
        let a = parse_sources("random:3:9", 100).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a, parse_sources("random:3:9", 100).unwrap());
        let mut d = a.clone();
        d.sort_unstable();
        d.dedup();
        assert_eq!(d.len(), 3);
        assert!(parse_sources("random:3", 100).is_err());
        assert!(parse_sources("random:200:1", 100).is_err());
    }

    #[test]
    fn rho_grid() {
        assert_eq!(default_rho_grid(1024), vec![10, 32, 103, 1024]);
        assert_eq!(default_rho_grid(1), vec![1]);
    }
}
