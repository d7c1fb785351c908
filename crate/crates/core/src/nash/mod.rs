//! Maximum-entropy Nash equilibria, Nash clustering and relative
//! population performance.

pub mod cluster;
pub mod oracle;
pub mod rpp;
mod simplex;
pub mod solver;

pub use cluster::{nash_clustering, Cluster, NashClustering};
pub use oracle::brute_force_nash;
pub use rpp::{rpp, rpp_matrix, RppMatrix, RppResult};
pub use solver::{exploitability, max_entropy_nash, MixedStrategy, SolverOptions, DEFAULT_MAX_ITER, DEFAULT_TOL};
