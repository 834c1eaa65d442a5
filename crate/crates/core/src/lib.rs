//! Similarity-based generalized Dirichlet process (SGDP) partitions and a
//! Gaussian-process mixture model for clustering functional data observed
//! over spatial units.
//!
//! * [`partition`]: GDP and SGDP sequential allocation rules, joint
//!   probabilities, exact full conditionals and prior simulation.
//! * [`gp`]: RBF Gram matrices, Gaussian densities and conjugate updates.
//! * [`spatiotemporal`]: datasets with period indicators, standardization and
//!   CSV ingestion.
//! * [`sampler`]: the Gibbs / Metropolis-Hastings posterior sampler.
//! * [`metrics`]: adjusted Rand index, purity and RMSE.
//! * [`simdata`]: synthetic grouped curves with block adjacency.

pub mod error;
pub mod gp;
pub mod metrics;
pub mod partition;
pub mod sampler;
pub mod simdata;
pub mod spatiotemporal;
pub mod util;

pub use error::{Error, Result};
