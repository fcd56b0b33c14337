use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oracle::truncated_search;
use crate::dist::Distance;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Samples used when estimating k_ρ unless told otherwise.
pub const DEFAULT_KRHO_SAMPLES: usize = 100;

/// Sampled lower estimate of the least k such that every vertex reaches its
/// ρ nearest vertices within k hops.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRhoEstimate {
    pub graph: u64,
    pub rho: usize,
    pub k_rho_hat: u32,
    pub samples: usize,
    /// Whether every vertex was examined, making `k_rho_hat` exact.
    pub exact: bool,
    pub per_sample_k: Vec<u32>,
}

fn check_rho(g: &Graph, rho: usize) -> Result<()> {
    if rho == 0 || rho > g.n() {
        return Err(Error::Domain(format!("rho {rho} outside 1..={}", g.n())));
    }
    Ok(())
}

/// Estimates k_ρ from `samples` vertices drawn uniformly with replacement.
pub fn estimate_k_rho(g: &Graph, rho: usize, samples: usize, seed: u64) -> Result<KRhoEstimate> {
    check_rho(g, rho)?;
    if samples == 0 {
        return Err(Error::Domain("samples must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks: Vec<VertexId> = (0..samples).map(|_| rng.gen_range(0..g.n() as VertexId)).collect();
    let per_sample_k: Vec<u32> = picks.par_iter().map(|&v| truncated_search(g, v, rho).0).collect();
    Ok(KRhoEstimate {
        graph: g.fingerprint(),
        rho,
        k_rho_hat: per_sample_k.iter().copied().max().unwrap_or(0),
        samples,
        exact: false,
        per_sample_k,
    })
}

/// k_ρ over every vertex. Costs n truncated searches.
pub fn exact_k_rho(g: &Graph, rho: usize) -> Result<KRhoEstimate> {
    check_rho(g, rho)?;
    let per_sample_k: Vec<u32> = (0..g.n() as VertexId)
        .into_par_iter()
        .map(|v| truncated_search(g, v, rho).0)
        .collect();
    Ok(KRhoEstimate {
        graph: g.fingerprint(),
        rho,
        k_rho_hat: per_sample_k.iter().copied().max().unwrap_or(0),
        samples: g.n(),
        exact: true,
        per_sample_k,
    })
}

/// Distance from each vertex to its ρ-th nearest (itself being the first),
/// [`crate::INF`] when fewer than ρ are reachable.
pub fn compute_r_rho_table(g: &Graph, rho: usize) -> Result<Vec<Distance>> {
    check_rho(g, rho)?;
    Ok((0..g.n() as VertexId)
        .into_par_iter()
        .map(|v| truncated_search(g, v, rho).1)
        .collect())
}
