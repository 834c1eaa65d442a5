use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing map applied to pairwise similarities before they
/// enter the allocation weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimilarityMap {
    #[default]
    Identity,
    /// `s^exponent`, exponent > 0.
    Power { exponent: f64 },
}

impl SimilarityMap {
    pub fn apply(&self, s: f64) -> f64 {
        match *self {
            SimilarityMap::Identity => s,
            SimilarityMap::Power { exponent } => s.powf(exponent),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SimilarityMap::Identity => Ok(()),
            SimilarityMap::Power { exponent } if exponent > 0.0 && exponent.is_finite() => Ok(()),
            SimilarityMap::Power { exponent } => Err(Error::invalid(format!(
                "power similarity map needs a positive exponent, got {exponent}"
            ))),
        }
    }
}

/// Tolerance for treating `alpha * beta` as exactly 1.
pub(crate) const UNIT_MASS_TOL: f64 = 1e-12;

fn check_alpha_beta(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::invalid(format!("beta must lie in (0, 1), got {beta}")));
    }
    // alpha <= 1 can make a tail factor non-positive; the only admitted case is
    // the unit-mass (Dirichlet process) case, where every tail factor is 1.
    if alpha <= 1.0 && (alpha * beta - 1.0).abs() > UNIT_MASS_TOL {
        return Err(Error::invalid(format!(
            "alpha must exceed 1 unless alpha * beta = 1, got alpha = {alpha}, beta = {beta}"
        )));
    }
    Ok(())
}

/// Parameters of the GDP partition: stick proportions Be(alpha*beta, alpha*(1-beta)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GdpParams {
    pub alpha: f64,
    pub beta: f64,
}

impl GdpParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        check_alpha_beta(alpha, beta)?;
        Ok(Self { alpha, beta })
    }
}

/// Parameters of the similarity-weighted partition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SgdpParams {
    pub alpha: f64,
    pub beta: f64,
    /// Similarity of non-adjacent pairs; adjacent pairs have similarity 1.
    pub tau: f64,
    #[serde(default)]
    pub lambda: SimilarityMap,
}

impl SgdpParams {
    pub fn new(alpha: f64, beta: f64, tau: f64) -> Result<Self> {
        Self::with_map(alpha, beta, tau, SimilarityMap::Identity)
    }

    pub fn with_map(alpha: f64, beta: f64, tau: f64, lambda: SimilarityMap) -> Result<Self> {
        check_alpha_beta(alpha, beta)?;
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::invalid(format!("tau must lie in (0, 1), got {tau}")));
        }
        lambda.validate()?;
        Ok(Self {
            alpha,
            beta,
            tau,
            lambda,
        })
    }

    pub fn gdp(&self) -> GdpParams {
        GdpParams {
            alpha: self.alpha,
            beta: self.beta,
        }
    }
}
