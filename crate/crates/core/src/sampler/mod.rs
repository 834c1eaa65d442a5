//! Posterior sampling for the per-period GP mixture with GDP-type partition
//! priors: conjugate Gibbs updates for atoms, scales and overall means,
//! exact (or optionally approximate) assignment conditionals, and
//! random-walk Metropolis-Hastings for (alpha, beta, tau) and kernel ranges.

mod chain;
mod config;
mod diagnostics;
mod gibbs;
mod prior_sim;
mod priors;
mod state;

pub use chain::{run_chain, run_chain_indexed, run_sampler, ChainSummary, Draw, PeriodDraw, PeriodSummary};
pub use config::{
    ChainConfig, FitConfig, InitPartition, Model, ProposalVariances, REFERENCE_BURN_IN, REFERENCE_SAMPLES,
};
pub use diagnostics::{
    binder_loss, effective_sample_size, point_partition, point_partition_index, posterior_similarity,
};
pub use gibbs::{
    correlation_factor, existing_cluster_loglik, initial_state, new_cluster_loglik, AcceptanceStats, ItemStats,
    Sampler,
};
pub use prior_sim::{sample_alpha, sample_prior_state, simulate_observations};
pub use priors::{BetaPrior, GammaPrior, HyperPriors, InvGammaPrior};
pub use state::{partition_prior, McmcState, PeriodState};
