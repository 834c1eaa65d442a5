//! Forward simulation from the prior, used by joint-distribution tests.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::config::{ChainConfig, Model};
use super::gibbs::correlation_factor;
use super::priors::HyperPriors;
use super::state::{partition_prior, McmcState, PeriodState};
use crate::error::Result;
use crate::gp::SpdFactor;
use crate::spatiotemporal::FunctionalDataset;

/// Draws alpha from its prior restricted to alpha > 1.
pub fn sample_alpha<R: Rng + ?Sized>(priors: &HyperPriors, rng: &mut R) -> f64 {
    loop {
        let a = priors.alpha.sample(rng);
        if a > 1.0 {
            return a;
        }
    }
}

/// Draws every latent variable from the prior, for the item count, grid and
/// periods of `shape`.
pub fn sample_prior_state<R: Rng + ?Sized>(
    shape: &FunctionalDataset,
    priors: &HyperPriors,
    config: &ChainConfig,
    rng: &mut R,
) -> Result<McmcState> {
    let d = shape.dim();
    let eta = priors.eta_prior();
    let m_m = DVector::from_element(d, priors.m_mean);
    let c_m = SpdFactor::new(&(DMatrix::identity(d, d) * priors.m_var))?;
    let mut periods = Vec::with_capacity(shape.n_periods());
    for _ in 0..shape.n_periods() {
        let alpha = sample_alpha(priors, rng);
        let beta = match config.model {
            Model::Sdp => 1.0 / alpha,
            _ => priors.beta.sample(rng),
        };
        let tau = config.model.has_tau().then(|| priors.tau.sample(rng));
        let prior = partition_prior(config.model, shape.adjacency(), alpha, beta, tau, config.lambda)?;
        let z = prior.sample(shape.n_areas(), rng)?;
        let eta_theta = eta.sample(rng).sqrt();
        let phi_theta = priors.phi.sample(rng);
        let m_theta = c_m.sample(&m_m, rng);
        let c_theta = correlation_factor(shape.grid(), phi_theta)?.scaled(eta_theta * eta_theta);
        let atoms = (0..z.n_clusters()).map(|_| c_theta.sample(&m_theta, rng)).collect();
        periods.push(PeriodState {
            z,
            atoms,
            m_theta,
            alpha,
            beta,
            tau,
            eta_theta,
            phi_theta,
        });
    }
    Ok(McmcState {
        periods,
        eta_y: eta.sample(rng).sqrt(),
        phi_y: priors.phi.sample(rng),
    })
}

/// Draws observations given every latent variable.
pub fn simulate_observations<R: Rng + ?Sized>(
    shape: &FunctionalDataset,
    state: &McmcState,
    rng: &mut R,
) -> Result<FunctionalDataset> {
    let cy = correlation_factor(shape.grid(), state.phi_y)?.scaled(state.eta_y * state.eta_y);
    let mut curves = Vec::with_capacity(shape.curves().len());
    for i in 0..shape.n_areas() {
        for t in 0..shape.n_days() {
            curves.push(cy.sample(&shape.fitted_mean(state, i, t), rng));
        }
    }
    shape.with_curves(curves)
}
