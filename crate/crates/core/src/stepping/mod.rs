//! The stepping framework: repeatedly pick a threshold, extract every queued
//! vertex at or below it, and relax their out-arcs in parallel.

mod mode;
mod policy;
mod relax;
mod threshold;

pub use mode::{select_mode, Mode, ModeOverride};
pub use policy::{AlgorithmKind, Policy, RhoSelector, DEFAULT_RHO};
pub use relax::{local_bfs_neighborhood, relax_neighbors, Tally};
pub use threshold::{exact_rho_threshold, rho_warmup_adjust, sample_rho_threshold};

use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{Distance, DistanceMap, INF};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::labpq::{ArrayPq, LabPq, MinKeyPlusValue, TournamentTree, WorkCounters};

/// Queue implementation used by a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    #[default]
    Tree,
    Array,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree" => Ok(Backend::Tree),
            "array" => Ok(Backend::Array),
            _ => Err(Error::Config(format!("unknown backend {s:?}"))),
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Tree => "tree",
            Backend::Array => "array",
        })
    }
}

/// Tuning knobs shared by every policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub backend: Backend,
    /// A round is dense when frontier plus incident edges exceed this
    /// fraction of `m`.
    pub dense_fraction: f64,
    /// Non-dense rounds with average frontier degree below this are
    /// super-sparse.
    pub super_sparse_degree: f64,
    pub mode: ModeOverride,
    /// Local search in super-sparse rounds of Δ*- and ρ-stepping.
    pub fusion: bool,
    /// Vertices a single local search may touch.
    pub fusion_budget: usize,
    /// Pull from neighbors before relaxing (undirected graphs only).
    pub bidirectional: bool,
    /// Oversampling constant of the sampled ρ selector.
    pub rho_sample_constant: usize,
    /// Dense rounds at the start that use a reduced ρ (sampled selector).
    pub warmup_rounds: usize,
    pub warmup_fraction: f64,
    pub seed: u64,
    /// Worker count; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            backend: Backend::Tree,
            dense_fraction: 1.0 / 20.0,
            super_sparse_degree: 20.0,
            mode: ModeOverride::Auto,
            fusion: true,
            fusion_budget: 4096,
            bidirectional: true,
            rho_sample_constant: 10,
            warmup_rounds: 2,
            warmup_fraction: 0.1,
            seed: 0x5eed,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("{what} must be positive")));
        if !(self.dense_fraction > 0.0 && self.dense_fraction.is_finite()) {
            return bad("dense_fraction");
        }
        if !(self.super_sparse_degree > 0.0 && self.super_sparse_degree.is_finite()) {
            return bad("super_sparse_degree");
        }
        if self.fusion_budget == 0 {
            return bad("fusion_budget");
        }
        if self.rho_sample_constant == 0 {
            return bad("rho_sample_constant");
        }
        if !(self.warmup_fraction > 0.0 && self.warmup_fraction <= 1.0) {
            return Err(Error::Config("warmup_fraction must lie in (0, 1]".into()));
        }
        if self.threads == Some(0) {
            return bad("threads");
        }
        Ok(())
    }
}

/// One extraction round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundStats {
    /// 1-based index of the step (threshold) this round belongs to.
    pub step: usize,
    pub mode: Mode,
    pub theta: Distance,
    pub visited_vertices: usize,
    pub visited_edges: u64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RunStats {
    pub policy: String,
    pub delta: Option<Distance>,
    /// Effective ρ after clamping to `n`.
    pub rho: Option<usize>,
    pub rho_selector: Option<RhoSelector>,
    pub backend: Backend,
    pub source: VertexId,
    pub n: usize,
    pub m: usize,
    pub graph_fingerprint: u64,
    /// Thresholds computed.
    pub steps: usize,
    /// Non-empty extractions; equals `steps` for policies without substeps.
    pub substeps: usize,
    pub rounds: Vec<RoundStats>,
    pub relaxations_attempted: u64,
    pub relaxations_succeeded: u64,
    /// Calls to the shared queue's `update`.
    pub queue_updates: u64,
    /// Times each vertex was extracted.
    #[serde(skip)]
    pub extractions: Vec<u32>,
    pub max_extractions: u32,
    pub fused_rounds: usize,
    /// Bidirectional relaxation was requested on a directed graph.
    pub bidirectional_ignored: bool,
    /// Node-touch counts of the tree backend.
    pub queue_work: Option<WorkCounters>,
    pub wall_seconds: f64,
}

impl RunStats {
    pub fn visited_vertices(&self) -> Vec<usize> {
        self.rounds.iter().map(|r| r.visited_vertices).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SsspOutput {
    pub dist: Vec<Distance>,
    pub stats: RunStats,
}

enum Queue {
    Tree(TournamentTree),
    Array(ArrayPq),
}

impl Queue {
    fn get(&self) -> &dyn LabPq {
        match self {
            Queue::Tree(t) => t,
            Queue::Array(a) => a,
        }
    }

    fn get_mut(&mut self) -> &mut dyn LabPq {
        match self {
            Queue::Tree(t) => t,
            Queue::Array(a) => a,
        }
    }
}

/// Computes distances from `source` under `policy`.
pub fn run_sssp(g: &Graph, source: VertexId, policy: &Policy, cfg: &RunConfig) -> Result<SsspOutput> {
    cfg.validate()?;
    policy.validate(g.n())?;
    if source as usize >= g.n() {
        return Err(Error::Domain(format!("source {source} outside 0..{}", g.n())));
    }
    match cfg.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            pool.install(|| run(g, source, policy, cfg))
        }
        None => run(g, source, policy, cfg),
    }
}

fn run(g: &Graph, source: VertexId, policy: &Policy, cfg: &RunConfig) -> Result<SsspOutput> {
    let start = Instant::now();
    let n = g.n();
    let dist = Arc::new(DistanceMap::new(n));
    dist.set(source, 0);
    let aug: Option<Arc<dyn crate::labpq::Augmentation>> = match policy {
        Policy::Radius { radii } => Some(Arc::new(MinKeyPlusValue::new(radii.to_vec()))),
        _ => None,
    };
    let mut queue = match cfg.backend {
        Backend::Tree => Queue::Tree(TournamentTree::build(dist.clone(), n, &[], aug)),
        Backend::Array => Queue::Array(ArrayPq::with_augmentation(dist.clone(), n, aug)),
    };
    queue.get().update(source);

    let bidirectional = cfg.bidirectional && !g.is_directed();
    let mut stats = RunStats {
        policy: policy.name().to_string(),
        delta: match policy {
            Policy::Delta(d) | Policy::DeltaStar(d) => Some(*d),
            _ => None,
        },
        rho: match policy {
            Policy::Rho { rho, .. } => Some((*rho).min(n).max(1)),
            _ => None,
        },
        rho_selector: match policy {
            Policy::Rho { selector, .. } => Some(*selector),
            _ => None,
        },
        backend: cfg.backend,
        source,
        n,
        m: g.m(),
        graph_fingerprint: g.fingerprint(),
        extractions: vec![0; n],
        bidirectional_ignored: cfg.bidirectional && g.is_directed(),
        ..RunStats::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut i: u64 = 1;
    let mut last_mode = Mode::Sparse;
    let mut dense_rounds = 0usize;

    while !queue.get().is_empty() {
        let q = queue.get_mut();
        let theta = match policy {
            Policy::Dijkstra => q.min_key(),
            Policy::BellmanFord => INF,
            Policy::Delta(d) | Policy::DeltaStar(d) => i.saturating_mul(*d),
            Policy::Radius { .. } => q.reduce()?,
            Policy::Rho { rho, selector } => {
                let ids = q.queued();
                let rho = (*rho).min(n).max(1);
                match selector {
                    RhoSelector::Exact => {
                        exact_rho_threshold(ids.iter().map(|&v| dist.get(v)).collect(), rho)?
                    }
                    RhoSelector::Sampled => {
                        let dense = last_mode == Mode::Dense;
                        let r = rho_warmup_adjust(dense_rounds, dense, rho, cfg.warmup_rounds, cfg.warmup_fraction);
                        if dense {
                            dense_rounds += 1;
                        }
                        sample_rho_threshold(ids.len(), |k| dist.get(ids[k]), r, cfg.rho_sample_constant, &mut rng)?
                    }
                }
            }
        };
        let mut frontier = q.extract(theta);
        if frontier.is_empty() {
            // Only fixed-width buckets can come up empty: skip to the first
            // non-empty one.
            let (Policy::Delta(d) | Policy::DeltaStar(d)) = policy else {
                return Err(Error::Domain(format!("empty extraction at threshold {theta}")));
            };
            let lo = q.min_key();
            i = (i + 1).max(lo.div_ceil(*d));
            continue;
        }
        stats.steps += 1;
        loop {
            stats.substeps += 1;
            let (mode, tally, fused) = process_round(g, &dist, &mut queue, &frontier, theta, policy, cfg, bidirectional);
            for &v in &frontier {
                stats.extractions[v as usize] += 1;
            }
            stats.relaxations_attempted += tally.attempted;
            stats.relaxations_succeeded += tally.succeeded;
            stats.queue_updates += tally.updates;
            stats.fused_rounds += fused as usize;
            stats.rounds.push(RoundStats {
                step: stats.steps,
                mode,
                theta,
                visited_vertices: frontier.len(),
                visited_edges: tally.attempted,
            });
            last_mode = mode;
            if !(policy.has_finish_check() && tally.hit) {
                break;
            }
            frontier = queue.get_mut().extract(theta);
            if frontier.is_empty() {
                break;
            }
        }
        if matches!(policy, Policy::Delta(_) | Policy::DeltaStar(_)) {
            i += 1;
        }
    }

    stats.max_extractions = stats.extractions.iter().copied().max().unwrap_or(0);
    if let Queue::Tree(t) = &queue {
        stats.queue_work = Some(t.counters());
    }
    drop(queue);
    stats.wall_seconds = start.elapsed().as_secs_f64();
    let dist = Arc::try_unwrap(dist).map(|d| d.to_vec()).unwrap_or_else(|d| d.to_vec());
    Ok(SsspOutput { dist, stats })
}

#[allow(clippy::too_many_arguments)]
fn process_round(
    g: &Graph,
    dist: &DistanceMap,
    queue: &mut Queue,
    frontier: &[VertexId],
    theta: Distance,
    policy: &Policy,
    cfg: &RunConfig,
    bidirectional: bool,
) -> (Mode, Tally, bool) {
    let incident: u64 = frontier.par_iter().map(|&v| g.degree(v) as u64).sum();
    let mode = match cfg.mode {
        ModeOverride::Auto => select_mode(
            frontier.len(),
            incident,
            g.m(),
            cfg.dense_fraction,
            cfg.super_sparse_degree,
        ),
        ModeOverride::Dense => Mode::Dense,
        ModeOverride::Sparse => Mode::Sparse,
        ModeOverride::SuperSparse => Mode::SuperSparse,
    };
    if let Queue::Array(a) = queue {
        a.set_mode(mode.queue_mode());
    }
    let fuse = cfg.fusion && policy.allows_fusion() && mode == Mode::SuperSparse;
    let q = queue.get();
    let tally = frontier
        .par_iter()
        .map(|&u| {
            if fuse {
                local_bfs_neighborhood(g, u, dist, q, theta, cfg.fusion_budget, bidirectional)
            } else {
                relax_neighbors(g, u, dist, q, theta, bidirectional)
            }
        })
        .reduce(Tally::default, Tally::merge);
    (mode, tally, fuse)
}
