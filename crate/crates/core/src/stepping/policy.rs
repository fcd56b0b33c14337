use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::dist::Distance;
use crate::error::{Error, Result};

/// Default `ρ` for ρ-stepping, clamped to `n` on smaller graphs.
pub const DEFAULT_RHO: usize = 1 << 21;

/// How ρ-stepping picks its threshold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhoSelector {
    /// Sort a small uniform sample of frontier keys.
    #[default]
    Sampled,
    /// Select the exact ρ-th smallest key.
    Exact,
}

/// Which stepping algorithm to run: the rule computing each step's threshold
/// and whether repeated substeps reuse it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Threshold = smallest queued distance.
    Dijkstra,
    /// Threshold = infinity.
    BellmanFord,
    /// Threshold = `i * delta`; substeps until nothing new falls below it.
    Delta(Distance),
    /// Threshold = `i * delta`, advancing `i` after every step.
    DeltaStar(Distance),
    /// Threshold = the ρ-th smallest queued distance.
    Rho { rho: usize, selector: RhoSelector },
    /// Threshold = min over the queue of `δ[v] + radius[v]`; substeps until
    /// nothing new falls below it.
    Radius { radii: Arc<[Distance]> },
}

impl Policy {
    pub fn rho(rho: usize) -> Self {
        Policy::Rho { rho, selector: RhoSelector::Sampled }
    }

    pub fn rho_exact(rho: usize) -> Self {
        Policy::Rho { rho, selector: RhoSelector::Exact }
    }

    pub fn radius(radii: Vec<Distance>) -> Self {
        Policy::Radius { radii: radii.into() }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Policy::Dijkstra => "dijkstra",
            Policy::BellmanFord => "bellman-ford",
            Policy::Delta(_) => "delta",
            Policy::DeltaStar(_) => "delta-star",
            Policy::Rho { .. } => "rho",
            Policy::Radius { .. } => "radius",
        }
    }

    /// Whether a step may repeat extraction with an unchanged threshold.
    pub fn has_finish_check(&self) -> bool {
        matches!(self, Policy::Delta(_) | Policy::Radius { .. })
    }

    /// Local-search fusion is only applied by Δ*- and ρ-stepping.
    pub fn allows_fusion(&self) -> bool {
        matches!(self, Policy::DeltaStar(_) | Policy::Rho { .. })
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        match self {
            Policy::Delta(0) | Policy::DeltaStar(0) => {
                Err(Error::Config("delta must be positive".into()))
            }
            Policy::Rho { rho: 0, .. } => Err(Error::Config("rho must be positive".into())),
            Policy::Radius { radii } if radii.len() != n => Err(Error::Config(format!(
                "radius table has {} entries for {n} vertices",
                radii.len()
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Delta(d) | Policy::DeltaStar(d) => write!(f, "{}(delta={d})", self.name()),
            Policy::Rho { rho, selector } => {
                write!(f, "rho(rho={rho}, {})", match selector {
                    RhoSelector::Sampled => "sampled",
                    RhoSelector::Exact => "exact",
                })
            }
            _ => f.write_str(self.name()),
        }
    }
}

/// Algorithm names accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgorithmKind {
    Dijkstra,
    BellmanFord,
    Delta,
    DeltaStar,
    Rho,
    Radius,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 6] = [
        AlgorithmKind::Dijkstra,
        AlgorithmKind::BellmanFord,
        AlgorithmKind::Delta,
        AlgorithmKind::DeltaStar,
        AlgorithmKind::Rho,
        AlgorithmKind::Radius,
    ];

    pub fn needs_delta(self) -> bool {
        matches!(self, AlgorithmKind::Delta | AlgorithmKind::DeltaStar)
    }

    pub fn needs_rho(self) -> bool {
        matches!(self, AlgorithmKind::Rho | AlgorithmKind::Radius)
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "dijkstra" => AlgorithmKind::Dijkstra,
            "bellman-ford" | "bf" => AlgorithmKind::BellmanFord,
            "delta" => AlgorithmKind::Delta,
            "delta-star" => AlgorithmKind::DeltaStar,
            "rho" => AlgorithmKind::Rho,
            "radius" => AlgorithmKind::Radius,
            _ => return Err(Error::Config(format!("unknown algorithm {s:?}"))),
        })
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgorithmKind::Dijkstra => "dijkstra",
            AlgorithmKind::BellmanFord => "bellman-ford",
            AlgorithmKind::Delta => "delta",
            AlgorithmKind::DeltaStar => "delta-star",
            AlgorithmKind::Rho => "rho",
            AlgorithmKind::Radius => "radius",
        })
    }
}
