use serde::{Deserialize, Serialize};

use super::{KRhoEstimate, OracleResult};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::stepping::{RhoSelector, RunStats};

/// Measured envelope for tree-backend node touches against
/// `U * (1 + log2(n * S / U))`.
pub const TREE_WORK_CONSTANT: f64 = 8.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// Graph fingerprint, hex.
    pub graph: String,
    pub policy: String,
    pub params: serde_json::Value,
    pub check: String,
    pub observed: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Checks each run against the bounds that apply to its policy.
///
/// Every run gets the extraction-count check. Bellman-Ford, Dijkstra, Δ*-
/// and exact-selector ρ-stepping on undirected graphs get step checks, the
/// latter only when `krho` holds an estimate for the run's ρ. Tree-backend
/// runs get a work check.
pub fn bound_report(
    g: &Graph,
    runs: &[RunStats],
    oracle: &OracleResult,
    krho: &[KRhoEstimate],
) -> Result<BoundReport> {
    let fp = g.fingerprint();
    if oracle.graph != fp {
        return Err(Error::Domain("oracle was computed on a different graph".into()));
    }
    if let Some(k) = krho.iter().find(|k| k.graph != fp) {
        return Err(Error::Domain(format!("k_rho estimate for rho={} is from a different graph", k.rho)));
    }
    let k_n = oracle.k_n as f64;
    let big_l = g.max_weight() as f64;
    let n = g.n() as f64;
    let mut report = BoundReport::default();
    for run in runs {
        if run.graph_fingerprint != fp {
            return Err(Error::Domain(format!("{} run is from a different graph", run.policy)));
        }
        if run.source != oracle.source {
            return Err(Error::Domain(format!(
                "{} run from source {} but oracle from {}",
                run.policy, run.source, oracle.source
            )));
        }
        let params = serde_json::json!({
            "backend": run.backend,
            "source": run.source,
            "delta": run.delta,
            "rho": run.rho,
            "rho_selector": run.rho_selector,
        });
        let mut push = |check: &str, observed: f64, bound: f64| {
            report.checks.push(BoundCheck {
                graph: format!("{fp:016x}"),
                policy: run.policy.clone(),
                params: params.clone(),
                check: check.to_string(),
                observed,
                bound,
                pass: observed <= bound,
            });
        };
        // The source is extracted once even when nothing else is reachable.
        push("max-extractions", run.max_extractions as f64, k_n.max(1.0));
        let steps = run.steps as f64;
        match run.policy.as_str() {
            "dijkstra" => push("dijkstra-single-extraction", run.max_extractions as f64, 1.0),
            "bellman-ford" => push("bellman-ford-steps", steps, k_n + 1.0),
            "delta-star" => {
                let delta = run.delta.unwrap_or(1) as f64;
                push("delta-star-steps", steps, (k_n * big_l / delta).ceil() + k_n);
            }
            "rho" if run.rho_selector == Some(RhoSelector::Exact) && !g.is_directed() => {
                let rho = run.rho.unwrap_or(1);
                if let Some(k) = krho.iter().find(|k| k.rho == rho && k.exact) {
                    let bound = (2.0 * k.k_rho_hat as f64 + 3.0) * (g.n().div_ceil(rho)) as f64;
                    push("rho-steps", steps, bound);
                }
            }
            _ => {}
        }
        if let Some(w) = run.queue_work {
            let u = (run.queue_updates as f64).max(1.0);
            let s = run.substeps as f64;
            let bound = TREE_WORK_CONSTANT * u * (1.0 + (n * s / u).max(1.0).log2());
            push("tree-work", w.total() as f64, bound);
        }
    }
    Ok(report)
}
