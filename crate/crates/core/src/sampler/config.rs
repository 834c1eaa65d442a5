//! Chain configuration, read from JSON.

use serde::{Deserialize, Serialize};

use super::priors::HyperPriors;
use crate::error::{Error, Result};
use crate::partition::{ConditionalMode, SimilarityMap};

/// Partition prior placed on each period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Similarity-weighted GDP with (alpha, beta, tau) per period.
    #[default]
    Sgdp,
    /// Plain GDP, no similarity (tau = 1).
    Gdp,
    /// Similarity-weighted Dirichlet process: beta = 1 / alpha.
    Sdp,
}

impl Model {
    pub fn has_tau(&self) -> bool {
        !matches!(self, Model::Gdp)
    }

    pub fn has_free_beta(&self) -> bool {
        !matches!(self, Model::Sdp)
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sgdp" => Ok(Model::Sgdp),
            "gdp" => Ok(Model::Gdp),
            "sdp" => Ok(Model::Sdp),
            other => Err(Error::invalid(format!(
                "unknown model {other:?} (expected sgdp, gdp or sdp)"
            ))),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Sgdp => "sgdp",
            Model::Gdp => "gdp",
            Model::Sdp => "sdp",
        })
    }
}

/// Variances of the Gaussian random-walk proposals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProposalVariances {
    pub tau: f64,
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
}

impl Default for ProposalVariances {
    fn default() -> Self {
        Self {
            tau: 1e-2,
            alpha: 1e-1,
            beta: 1e-1,
            phi: 1e-1,
        }
    }
}

/// Starting partition of every period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitPartition {
    #[default]
    OneCluster,
    Singletons,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChainConfig {
    pub burn_in: usize,
    pub samples: usize,
    pub thin: usize,
    pub seed: u64,
    pub model: Model,
    pub conditional_mode: ConditionalMode,
    pub permute_order: bool,
    pub proposals: ProposalVariances,
    pub lambda: SimilarityMap,
    pub init: InitPartition,
    /// Grid indices at which cluster means are recorded in every draw.
    pub record_points: Vec<usize>,
    /// Drops the likelihood from assignment updates (prior-only check).
    pub prior_only: bool,
}

/// Reference lengths of the simulation study.
pub const REFERENCE_BURN_IN: usize = 16_000;
pub const REFERENCE_SAMPLES: usize = 4_000;

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            burn_in: REFERENCE_BURN_IN,
            samples: REFERENCE_SAMPLES,
            thin: 1,
            seed: 1,
            model: Model::Sgdp,
            conditional_mode: ConditionalMode::Exact,
            permute_order: false,
            proposals: ProposalVariances::default(),
            lambda: SimilarityMap::Identity,
            init: InitPartition::OneCluster,
            record_points: Vec::new(),
            prior_only: false,
        }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.thin == 0 {
            return Err(Error::invalid("thin must be at least 1"));
        }
        let p = &self.proposals;
        for (name, v) in [("tau", p.tau), ("alpha", p.alpha), ("beta", p.beta), ("phi", p.phi)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("proposal variance for {name} must be positive")));
            }
        }
        self.lambda.validate()
    }

    /// Number of recorded draws.
    pub fn n_draws(&self) -> usize {
        self.samples / self.thin.max(1)
    }
}

/// Chain settings plus hyperpriors, as stored in a configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct FitConfig {
    #[serde(flatten)]
    pub chain: ChainConfig,
    #[serde(default)]
    pub priors: HyperPriors,
}
