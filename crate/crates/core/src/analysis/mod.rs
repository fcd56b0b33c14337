//! Sequential oracles, graph-parameter estimates and bound checks.

mod krho;
mod oracle;
mod report;

pub use krho::{compute_r_rho_table, estimate_k_rho, exact_k_rho, KRhoEstimate, DEFAULT_KRHO_SAMPLES};
pub use oracle::{bellman_ford_oracle, dijkstra_oracle, OracleResult};
pub use report::{bound_report, BoundCheck, BoundReport, TREE_WORK_CONSTANT};
