//! Latent variables of the per-period GP mixture.

use nalgebra::DVector;

use super::config::Model;
use crate::error::{Error, Result};
use crate::partition::{Adjacency, GdpParams, Partition, PartitionPrior, SgdpParams, SimilarityMap};
use crate::spatiotemporal::PeriodMeans;

/// Latent variables of one period.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodState {
    pub z: Partition,
    /// `atoms[j]` is the mean function of cluster `j`.
    pub atoms: Vec<DVector<f64>>,
    pub m_theta: DVector<f64>,
    pub alpha: f64,
    pub beta: f64,
    /// `None` under the plain GDP.
    pub tau: Option<f64>,
    pub eta_theta: f64,
    pub phi_theta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McmcState {
    pub periods: Vec<PeriodState>,
    pub eta_y: f64,
    pub phi_y: f64,
}

impl PeriodMeans for McmcState {
    fn period_mean(&self, item: usize, period: usize) -> &DVector<f64> {
        let p = &self.periods[period];
        &p.atoms[p.z.label(item)]
    }
}

/// Partition prior of one period for the given model.
pub fn partition_prior(
    model: Model,
    adj: &Adjacency,
    alpha: f64,
    beta: f64,
    tau: Option<f64>,
    lambda: SimilarityMap,
) -> Result<PartitionPrior> {
    match (model, tau) {
        (Model::Gdp, _) => Ok(PartitionPrior::gdp(GdpParams::new(alpha, beta)?)),
        (_, Some(tau)) => PartitionPrior::sgdp(adj, SgdpParams::with_map(alpha, beta, tau, lambda)?),
        (_, None) => Err(Error::invalid(format!("model {model} needs tau"))),
    }
}

impl PeriodState {
    pub fn n_clusters(&self) -> usize {
        self.z.n_clusters()
    }

    pub fn prior(&self, model: Model, adj: &Adjacency, lambda: SimilarityMap) -> Result<PartitionPrior> {
        partition_prior(model, adj, self.alpha, self.beta, self.tau, lambda)
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

impl McmcState {
    /// Checks the support of every parameter and the atom/cluster bijection.
    pub fn validate(&self, model: Model, n_items: usize, dim: usize) -> Result<()> {
        positive("eta_y", self.eta_y)?;
        positive("phi_y", self.phi_y)?;
        for (l, p) in self.periods.iter().enumerate() {
            if p.z.n_items() != n_items {
                return Err(Error::invalid(format!(
                    "period {l}: partition has {} items, expected {n_items}",
                    p.z.n_items()
                )));
            }
            Partition::from_canonical(p.z.labels().to_vec())?;
            if p.atoms.len() != p.z.n_clusters() {
                return Err(Error::invalid(format!(
                    "period {l}: {} atoms for {} clusters",
                    p.atoms.len(),
                    p.z.n_clusters()
                )));
            }
            if p.atoms.iter().chain(std::iter::once(&p.m_theta)).any(|a| a.len() != dim) {
                return Err(Error::invalid(format!("period {l}: mean function off the grid")));
            }
            positive("eta_theta", p.eta_theta)?;
            positive("phi_theta", p.phi_theta)?;
            if p.alpha <= 1.0 {
                return Err(Error::invalid(format!("period {l}: alpha must exceed 1, got {}", p.alpha)));
            }
            if !(p.beta > 0.0 && p.beta < 1.0) {
                return Err(Error::invalid(format!("period {l}: beta outside (0, 1)")));
            }
            match (model, p.tau) {
                (Model::Gdp, None) => {}
                (Model::Gdp, Some(_)) => {
                    return Err(Error::invalid("the plain GDP carries no tau"));
                }
                (_, Some(t)) if t > 0.0 && t < 1.0 => {}
                _ => return Err(Error::invalid(format!("period {l}: tau outside (0, 1)"))),
            }
            if model == Model::Sdp && (p.alpha * p.beta - 1.0).abs() > 1e-12 {
                return Err(Error::invalid(format!("period {l}: the SDP needs beta = 1 / alpha")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state() -> McmcState {
        McmcState {
            periods: vec![PeriodState {
                z: Partition::from_labels(&[0, 1, 0]),
                atoms: vec![DVector::zeros(2), DVector::from_element(2, 1.0)],
                m_theta: DVector::zeros(2),
                alpha: 2.0,
                beta: 0.7,
                tau: Some(0.3),
                eta_theta: 1.0,
                phi_theta: 1.0,
            }],
            eta_y: 1.0,
            phi_y: 1.0,
        }
    }

    #[test]
    fn validation() {
        let s = state();
        s.validate(Model::Sgdp, 3, 2).unwrap();
        assert!(s.validate(Model::Gdp, 3, 2).is_err());
        assert!(s.validate(Model::Sgdp, 4, 2).is_err());
        let mut bad = s.clone();
        bad.periods[0].atoms.pop();
        assert!(bad.validate(Model::Sgdp, 3, 2).is_err());
        let mut sdp = s.clone();
        sdp.periods[0].alpha = 4.0;
        sdp.periods[0].beta = 0.25;
        sdp.validate(Model::Sdp, 3, 2).unwrap();
        assert!(s.validate(Model::Sdp, 3, 2).is_err());
    }

    #[test]
    fn period_means_follow_labels() {
        let s = state();
        assert_eq!(s.period_mean(1, 0)[0], 1.0);
        assert_eq!(s.period_mean(2, 0)[0], 0.0);
    }
}
