//! Parallel single-source shortest paths.
//!
//! Every algorithm here is a *stepping* algorithm: it keeps the frontier in a
//! lazy-batched priority queue ([`labpq`]), repeatedly picks a distance
//! threshold, extracts every queued vertex at or below it and relaxes their
//! out-arcs in parallel. Policies differ only in how the threshold is picked.

pub mod analysis;
pub mod dist;
pub mod error;
pub mod graph;
pub mod labpq;
pub mod stepping;

pub use analysis::{bound_report, compute_r_rho_table, dijkstra_oracle, estimate_k_rho, exact_k_rho};
pub use dist::{checksum, Distance, DistanceMap, INF};
pub use error::{Error, Result};
pub use graph::{build_csr, EdgeList, Graph, VertexId, Weight};
pub use labpq::{ArrayPq, LabPq, NaivePq, TournamentTree};
pub use stepping::{run_sssp, Backend, Policy, RunConfig, RunStats, SsspOutput};
