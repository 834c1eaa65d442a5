//! Gibbs updates with Metropolis-Hastings steps for the partition and
//! kernel-range parameters.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use super::config::{ChainConfig, InitPartition, Model};
use super::priors::HyperPriors;
use super::state::{partition_prior, McmcState, PeriodState};
use crate::error::{Error, Result};
use crate::gp::{conjugate_posterior, GpSpec, SpdFactor, DEFAULT_JITTER};
use crate::partition::{canonicalize, Candidate, Partition, PartitionPrior};
use crate::spatiotemporal::FunctionalDataset;
use crate::util::sample_log_categorical;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Cholesky factor of the jittered RBF correlation matrix at range `phi`.
pub fn correlation_factor(grid: &[f64], phi: f64) -> Result<SpdFactor> {
    GpSpec {
        grid: grid.to_vec(),
        eta: 1.0,
        phi,
        jitter: DEFAULT_JITTER,
    }
    .correlation_factor()
}

/// Residual summaries of one item in one period, relative to the noise
/// covariance `C_y = L L^T`.
#[derive(Debug, Clone)]
pub struct ItemStats {
    /// Sum of the item's residual curves over the period's days.
    pub sum: DVector<f64>,
    /// `L^{-1} sum`.
    pub white_sum: DVector<f64>,
    /// `sum_t |L^{-1} r_t|^2`.
    pub white_sq: f64,
}

/// Log-likelihood of `count` curves with summaries `s` around mean `theta`
/// whose whitened version is `u`.
pub fn existing_cluster_loglik(s: &ItemStats, u: &DVector<f64>, count: usize, cy: &SpdFactor) -> f64 {
    let t = count as f64;
    let d = u.len() as f64;
    -0.5 * (t * (d * LN_2PI + cy.log_det()) + s.white_sq - 2.0 * u.dot(&s.white_sum)
        + t * u.norm_squared())
}

/// Log marginal likelihood of the curves summarized by `s` under a fresh mean
/// `theta ~ N(m_theta, C_theta)`; `pooled` factors `C_theta + C_y / count`.
pub fn new_cluster_loglik(
    s: &ItemStats,
    count: usize,
    m_theta: &DVector<f64>,
    cy: &SpdFactor,
    pooled: &SpdFactor,
) -> f64 {
    let t = count as f64;
    let d = m_theta.len() as f64;
    let within = -0.5 * (t * (d * LN_2PI + cy.log_det()) + s.white_sq - s.white_sum.norm_squared() / t);
    within + 0.5 * (d * LN_2PI + cy.log_det() - d * t.ln()) + pooled.log_pdf(&(&s.sum / t), m_theta)
}

/// Moves `item` to `to` and relabels canonically, carrying `atoms` along.
/// `fresh` becomes the atom of a new cluster.
fn move_item<T: Clone>(z: &mut Partition, atoms: &mut Vec<T>, item: usize, to: Candidate, fresh: Option<T>) {
    let k = z.n_clusters();
    let mut labels = z.labels().to_vec();
    labels[item] = match to {
        Candidate::Existing(l) => l,
        Candidate::New => k,
    };
    let (canon, map) = canonicalize(&labels);
    let new_z = Partition::from_canonical(canon).expect("canonicalized labels");
    let mut slots: Vec<Option<T>> = vec![None; new_z.n_clusters()];
    let mut fresh = fresh;
    for (old, target) in map.iter().enumerate() {
        if let Some(nw) = *target {
            slots[nw] = Some(if old == k {
                fresh.take().expect("a new cluster needs an atom")
            } else {
                atoms[old].clone()
            });
        }
    }
    *atoms = slots.into_iter().map(|a| a.expect("every cluster has an atom")).collect();
    *z = new_z;
}

fn inverse_gamma_draw<R: Rng + ?Sized>(shape: f64, scale: f64, rng: &mut R) -> f64 {
    super::priors::InvGammaPrior { shape, scale }.sample(rng)
}

/// Acceptance counters of the Metropolis-Hastings steps.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AcceptanceStats {
    counts: BTreeMap<String, [u64; 2]>,
}

impl AcceptanceStats {
    fn record(&mut self, name: String, accepted: bool) {
        let c = self.counts.entry(name).or_default();
        c[0] += accepted as u64;
        c[1] += 1;
    }

    pub fn rates(&self) -> BTreeMap<String, f64> {
        self.counts
            .iter()
            .map(|(k, c)| (k.clone(), c[0] as f64 / c[1].max(1) as f64))
            .collect()
    }
}

/// Sampler state together with the caches that depend on it.
#[derive(Debug, Clone)]
pub struct Sampler<'a> {
    data: &'a FunctionalDataset,
    priors: HyperPriors,
    config: ChainConfig,
    state: McmcState,
    part_priors: Vec<PartitionPrior>,
    r_y: SpdFactor,
    r_theta: Vec<SpdFactor>,
    m_m: DVector<f64>,
    c_m: DMatrix<f64>,
    days: Vec<Vec<usize>>,
    accept: AcceptanceStats,
}

/// Starting state used by [`Sampler::new`].
pub fn initial_state(data: &FunctionalDataset, priors: &HyperPriors, config: &ChainConfig) -> McmcState {
    let n = data.n_areas();
    let d = data.dim();
    let alpha = if priors.alpha.mean() > 1.0 { priors.alpha.mean() } else { 2.0 };
    let beta = match config.model {
        Model::Sdp => 1.0 / alpha,
        _ => priors.beta.mean().clamp(0.05, 0.95),
    };
    let z = match config.init {
        InitPartition::OneCluster => Partition::one_cluster(n),
        InitPartition::Singletons => Partition::singletons(n),
    };
    let periods = (0..data.n_periods())
        .map(|_| PeriodState {
            atoms: vec![DVector::zeros(d); z.n_clusters()],
            z: z.clone(),
            m_theta: DVector::from_element(d, priors.m_mean),
            alpha,
            beta,
            tau: config.model.has_tau().then_some(0.5),
            eta_theta: 1.0,
            phi_theta: 1.0,
        })
        .collect();
    McmcState {
        periods,
        eta_y: 1.0,
        phi_y: 1.0,
    }
}

impl<'a> Sampler<'a> {
    pub fn new(data: &'a FunctionalDataset, priors: &HyperPriors, config: &ChainConfig) -> Result<Self> {
        let state = initial_state(data, priors, config);
        Self::from_state(data, priors, config, state)
    }

    pub fn from_state(
        data: &'a FunctionalDataset,
        priors: &HyperPriors,
        config: &ChainConfig,
        state: McmcState,
    ) -> Result<Self> {
        priors.validate()?;
        config.validate()?;
        if state.periods.len() != data.n_periods() {
            return Err(Error::invalid(format!(
                "state has {} periods, data has {}",
                state.periods.len(),
                data.n_periods()
            )));
        }
        state.validate(config.model, data.n_areas(), data.dim())?;
        if let Some(&bad) = config.record_points.iter().find(|&&p| p >= data.dim()) {
            return Err(Error::invalid(format!("record point {bad} is off the grid")));
        }
        let adj = data.adjacency();
        let part_priors = state
            .periods
            .iter()
            .map(|p| p.prior(config.model, adj, config.lambda))
            .collect::<Result<_>>()?;
        let grid = data.grid();
        let r_theta = state
            .periods
            .iter()
            .map(|p| correlation_factor(grid, p.phi_theta))
            .collect::<Result<_>>()?;
        let d = data.dim();
        Ok(Self {
            data,
            priors: priors.clone(),
            config: config.clone(),
            r_y: correlation_factor(grid, state.phi_y)?,
            r_theta,
            part_priors,
            m_m: DVector::from_element(d, priors.m_mean),
            c_m: DMatrix::identity(d, d) * priors.m_var,
            days: (0..data.n_periods()).map(|l| data.design().active_days(l)).collect(),
            state,
            accept: AcceptanceStats::default(),
        })
    }

    /// Same state and caches on another dataset of identical shape.
    pub fn with_data<'b>(self, data: &'b FunctionalDataset) -> Result<Sampler<'b>> {
        if data.n_areas() != self.data.n_areas()
            || data.grid() != self.data.grid()
            || data.design() != self.data.design()
            || data.adjacency() != self.data.adjacency()
        {
            return Err(Error::invalid("replacement data differ in shape"));
        }
        Ok(Sampler {
            data,
            priors: self.priors,
            config: self.config,
            state: self.state,
            part_priors: self.part_priors,
            r_y: self.r_y,
            r_theta: self.r_theta,
            m_m: self.m_m,
            c_m: self.c_m,
            days: self.days,
            accept: self.accept,
        })
    }

    pub fn state(&self) -> &McmcState {
        &self.state
    }

    pub fn into_state(self) -> McmcState {
        self.state
    }

    pub fn data(&self) -> &FunctionalDataset {
        self.data
    }

    pub fn priors(&self) -> &HyperPriors {
        &self.priors
    }

    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    pub fn acceptance(&self) -> &AcceptanceStats {
        &self.accept
    }

    pub fn partition_prior(&self, period: usize) -> &PartitionPrior {
        &self.part_priors[period]
    }

    /// Factor of the noise covariance `C_y`.
    pub fn noise_factor(&self) -> SpdFactor {
        self.r_y.scaled(self.state.eta_y * self.state.eta_y)
    }

    /// Factor of the cluster-mean covariance `C_theta` of a period.
    pub fn atom_factor(&self, period: usize) -> SpdFactor {
        let eta = self.state.periods[period].eta_theta;
        self.r_theta[period].scaled(eta * eta)
    }

    /// Number of days in a period (curves per item entering its updates).
    pub fn period_days(&self, period: usize) -> usize {
        self.days[period].len()
    }

    /// Residual summaries of every item for a period.
    pub fn item_stats(&self, period: usize) -> Vec<ItemStats> {
        let cy = self.noise_factor();
        (0..self.data.n_areas())
            .map(|i| {
                let mut sum = DVector::zeros(self.data.dim());
                let mut white_sq = 0.0;
                for &t in &self.days[period] {
                    let r = self.data.period_residual(&self.state, i, t, period);
                    white_sq += cy.whiten(&r).norm_squared();
                    sum += r;
                }
                ItemStats {
                    white_sum: cy.whiten(&sum),
                    sum,
                    white_sq,
                }
            })
            .collect()
    }

    /// Redraws every cluster mean of a period from its Gaussian conditional.
    pub fn update_atoms<R: Rng + ?Sized>(&mut self, period: usize, stats: &[ItemStats], rng: &mut R) -> Result<()> {
        let t = self.period_days(period);
        let c_theta = self.atom_factor(period).matrix();
        let c_y = self.noise_factor().matrix();
        let p = &self.state.periods[period];
        let mut sums = vec![DVector::zeros(self.data.dim()); p.n_clusters()];
        for (i, s) in stats.iter().enumerate() {
            sums[p.z.label(i)] += &s.sum;
        }
        let mut atoms = Vec::with_capacity(sums.len());
        for (j, sum) in sums.iter().enumerate() {
            let post = conjugate_posterior(sum, p.z.sizes()[j] * t, &p.m_theta, &c_theta, &c_y)?;
            atoms.push(post.sample(rng)?);
        }
        self.state.periods[period].atoms = atoms;
        Ok(())
    }

    /// One Gibbs scan over the assignments of a period.
    pub fn update_assignments<R: Rng + ?Sized>(
        &mut self,
        period: usize,
        stats: &[ItemStats],
        rng: &mut R,
    ) -> Result<()> {
        let n = self.data.n_areas();
        let mut order: Vec<usize> = (0..n).collect();
        if self.config.permute_order {
            order.shuffle(rng);
        }
        let cy = self.noise_factor();
        let c_theta_f = self.atom_factor(period);
        let t = self.period_days(period);
        let pooled = SpdFactor::robust(&(c_theta_f.matrix() + cy.matrix() / t as f64), 0.0)?;
        let mut white: Vec<DVector<f64>> = self.state.periods[period]
            .atoms
            .iter()
            .map(|a| cy.whiten(a))
            .collect();
        for item in order {
            self.assign_one(period, item, &stats[item], &cy, &c_theta_f, &pooled, &mut white, rng)?;
        }
        Ok(())
    }

    /// Redraws the assignment of one item, computing its summaries afresh.
    pub fn update_assignment<R: Rng + ?Sized>(&mut self, period: usize, item: usize, rng: &mut R) -> Result<()> {
        let stats = self.item_stats(period);
        let cy = self.noise_factor();
        let c_theta_f = self.atom_factor(period);
        let t = self.period_days(period);
        let pooled = SpdFactor::robust(&(c_theta_f.matrix() + cy.matrix() / t as f64), 0.0)?;
        let mut white: Vec<DVector<f64>> = self.state.periods[period]
            .atoms
            .iter()
            .map(|a| cy.whiten(a))
            .collect();
        self.assign_one(period, item, &stats[item], &cy, &c_theta_f, &pooled, &mut white, rng)
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_one<R: Rng + ?Sized>(
        &mut self,
        period: usize,
        item: usize,
        s: &ItemStats,
        cy: &SpdFactor,
        c_theta: &SpdFactor,
        pooled: &SpdFactor,
        white: &mut Vec<DVector<f64>>,
        rng: &mut R,
    ) -> Result<()> {
        let t = self.period_days(period);
        let p = &self.state.periods[period];
        let prior = self.part_priors[period].full_conditional(item, &p.z, self.config.conditional_mode)?;
        let logw: Vec<f64> = prior
            .iter()
            .map(|&(c, lp)| {
                if self.config.prior_only {
                    return lp;
                }
                lp + match c {
                    Candidate::Existing(l) => existing_cluster_loglik(s, &white[l], t, cy),
                    Candidate::New => new_cluster_loglik(s, t, &p.m_theta, cy, pooled),
                }
            })
            .collect();
        let choice = prior[sample_log_categorical(&logw, rng)].0;
        if choice == Candidate::Existing(p.z.label(item)) {
            return Ok(());
        }
        let fresh = match choice {
            Candidate::New => {
                let post = conjugate_posterior(&s.sum, t, &p.m_theta, &c_theta.matrix(), &cy.matrix())?;
                Some(post.sample(rng)?)
            }
            Candidate::Existing(_) => None,
        };
        let fresh_white = fresh.as_ref().map(|a| cy.whiten(a));
        let p = &mut self.state.periods[period];
        let mut z = p.z.clone();
        move_item(&mut z, &mut p.atoms, item, choice, fresh);
        move_item(&mut p.z, white, item, choice, fresh_white);
        debug_assert_eq!(z, p.z);
        Ok(())
    }

    /// Residuals `y_it - mu_it` of every curve.
    fn residuals(&self) -> Vec<DVector<f64>> {
        let (n, tt) = (self.data.n_areas(), self.data.n_days());
        let mut out = Vec::with_capacity(n * tt);
        for i in 0..n {
            for t in 0..tt {
                out.push(self.data.curve(i, t) - self.data.fitted_mean(&self.state, i, t));
            }
        }
        out
    }

    /// Conjugate inverse-gamma draw of `eta_y^2`; the shape counts all n*T curves.
    pub fn update_eta_y<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        let quad: f64 = self.residuals().iter().map(|e| self.r_y.quad_form(e)).sum();
        let count = (self.data.n_areas() * self.data.n_days() * self.data.dim()) as f64;
        let [a, b] = self.priors.eta;
        self.state.eta_y = inverse_gamma_draw((a + count) / 2.0, (b + quad) / 2.0, rng).sqrt();
        Ok(())
    }

    /// Conjugate inverse-gamma draw of `eta_theta^2` of a period.
    pub fn update_eta_theta<R: Rng + ?Sized>(&mut self, period: usize, rng: &mut R) -> Result<()> {
        let p = &self.state.periods[period];
        let quad: f64 = p
            .atoms
            .iter()
            .map(|a| self.r_theta[period].quad_form(&(a - &p.m_theta)))
            .sum();
        let count = (p.n_clusters() * self.data.dim()) as f64;
        let [a, b] = self.priors.eta;
        let eta2 = inverse_gamma_draw((a + count) / 2.0, (b + quad) / 2.0, rng);
        self.state.periods[period].eta_theta = eta2.sqrt();
        Ok(())
    }

    /// Conjugate Gaussian draw of the overall mean function of a period.
    pub fn update_m_theta<R: Rng + ?Sized>(&mut self, period: usize, rng: &mut R) -> Result<()> {
        let c_theta = self.atom_factor(period).matrix();
        let p = &self.state.periods[period];
        let mut sum = DVector::zeros(self.data.dim());
        for a in &p.atoms {
            sum += a;
        }
        let post = conjugate_posterior(&sum, p.n_clusters(), &self.m_m, &self.c_m, &c_theta)?;
        self.state.periods[period].m_theta = post.sample(rng)?;
        Ok(())
    }

    fn random_walk<R: Rng + ?Sized>(current: f64, variance: f64, rng: &mut R) -> f64 {
        let xi: f64 = rng.sample(StandardNormal);
        current + variance.sqrt() * xi
    }

    fn accept<R: Rng + ?Sized>(log_ratio: f64, rng: &mut R) -> bool {
        if log_ratio.is_nan() {
            return false;
        }
        log_ratio >= 0.0 || rng.random::<f64>().ln() < log_ratio
    }

    fn partition_log_target(&self, period: usize, alpha: f64, beta: f64, tau: Option<f64>) -> Result<f64> {
        let z = &self.state.periods[period].z;
        let prior = partition_prior(self.config.model, self.data.adjacency(), alpha, beta, tau, self.config.lambda)?;
        prior.joint_log_prob(z)
    }

    /// Random-walk step for `(alpha, beta, tau)` with everything else fixed.
    fn mh_partition<R: Rng + ?Sized>(
        &mut self,
        period: usize,
        name: &str,
        propose: impl Fn(&PeriodState, f64) -> Option<(f64, f64, Option<f64>)>,
        log_prior: impl Fn(f64, f64, Option<f64>) -> f64,
        variance: f64,
        rng: &mut R,
    ) -> Result<()> {
        let p = &self.state.periods[period];
        let current = match name {
            "tau" => p.tau.expect("tau step only runs for similarity models"),
            "alpha" => p.alpha,
            _ => p.beta,
        };
        let proposal = Self::random_walk(current, variance, rng);
        let accepted = match propose(p, proposal) {
            None => false,
            Some((a, b, t)) => {
                let old = log_prior(p.alpha, p.beta, p.tau) + self.part_priors[period].joint_log_prob(&p.z)?;
                let new = log_prior(a, b, t) + self.partition_log_target(period, a, b, t)?;
                if Self::accept(new - old, rng) {
                    let p = &mut self.state.periods[period];
                    p.alpha = a;
                    p.beta = b;
                    p.tau = t;
                    self.part_priors[period] = partition_prior(
                        self.config.model,
                        self.data.adjacency(),
                        a,
                        b,
                        t,
                        self.config.lambda,
                    )?;
                    true
                } else {
                    false
                }
            }
        };
        self.accept.record(format!("{name}[{period}]"), accepted);
        Ok(())
    }

    pub fn mh_tau<R: Rng + ?Sized>(&mut self, period: usize, rng: &mut R) -> Result<()> {
        if !self.config.model.has_tau() {
            return Ok(());
        }
        let priors = self.clone_prior_fn();
        self.mh_partition(
            period,
            "tau",
            |p, t| (t > 0.0 && t < 1.0).then_some((p.alpha, p.beta, Some(t))),
            priors,
            self.config.proposals.tau,
            rng,
        )
    }

    pub fn mh_alpha<R: Rng + ?Sized>(&mut self, period: usize, rng: &mut R) -> Result<()> {
        let priors = self.clone_prior_fn();
        let sdp = self.config.model == Model::Sdp;
        self.mh_partition(
            period,
            "alpha",
            |p, a| (a > 1.0 && a.is_finite()).then_some((a, if sdp { 1.0 / a } else { p.beta }, p.tau)),
            priors,
            self.config.proposals.alpha,
            rng,
        )
    }

    pub fn mh_beta<R: Rng + ?Sized>(&mut self, period: usize, rng: &mut R) -> Result<()> {
        if !self.config.model.has_free_beta() {
            return Ok(());
        }
        let priors = self.clone_prior_fn();
        self.mh_partition(
            period,
            "beta",
            |p, b| (b > 0.0 && b < 1.0).then_some((p.alpha, b, p.tau)),
            priors,
            self.config.proposals.beta,
            rng,
        )
    }

    fn clone_prior_fn(&self) -> impl Fn(f64, f64, Option<f64>) -> f64 {
        let pr = self.priors.clone();
        let model = self.config.model;
        move |a, b, t| {
            let mut lp = pr.alpha.ln_pdf(a);
            if model.has_free_beta() {
                lp += pr.beta.ln_pdf(b);
            }
            if let Some(t) = t {
                lp += pr.tau.ln_pdf(t);
            }
            lp
        }
    }

    /// Log density of the atoms of a period given a correlation factor.
    fn atoms_loglik(&self, period: usize, r: &SpdFactor) -> f64 {
        let p = &self.state.periods[period];
        let f = r.scaled(p.eta_theta * p.eta_theta);
        p.atoms.iter().map(|a| f.log_pdf(a, &p.m_theta)).sum()
    }

    pub fn mh_phi_theta<R: Rng + ?Sized>(&mut self, period: usize, rng: &mut R) -> Result<()> {
        let current = self.state.periods[period].phi_theta;
        let proposal = Self::random_walk(current, self.config.proposals.phi, rng);
        let mut accepted = false;
        if proposal > 0.0 {
            // a proposal whose correlation matrix cannot be factorized is rejected
            if let Ok(r_new) = correlation_factor(self.data.grid(), proposal) {
                let phi = self.priors.phi;
                let old = phi.ln_pdf(current) + self.atoms_loglik(period, &self.r_theta[period]);
                let new = phi.ln_pdf(proposal) + self.atoms_loglik(period, &r_new);
                if Self::accept(new - old, rng) {
                    self.state.periods[period].phi_theta = proposal;
                    self.r_theta[period] = r_new;
                    accepted = true;
                }
            }
        }
        self.accept.record(format!("phi_theta[{period}]"), accepted);
        Ok(())
    }

    /// `sum log N(e | 0, eta^2 R)` over residuals with scatter matrix `scatter`.
    fn noise_loglik(&self, r: &SpdFactor, scatter: &DMatrix<f64>, count: usize) -> f64 {
        let eta2 = self.state.eta_y * self.state.eta_y;
        let d = self.data.dim() as f64;
        let log_det = r.log_det() + d * eta2.ln();
        let trace = r.solve_matrix(scatter).trace() / eta2;
        -0.5 * (count as f64 * (d * LN_2PI + log_det) + trace)
    }

    pub fn mh_phi_y<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        let current = self.state.phi_y;
        let proposal = Self::random_walk(current, self.config.proposals.phi, rng);
        let mut accepted = false;
        if proposal > 0.0 {
            if let Ok(r_new) = correlation_factor(self.data.grid(), proposal) {
                let res = self.residuals();
                let d = self.data.dim();
                let mut scatter = DMatrix::zeros(d, d);
                for e in &res {
                    scatter.ger(1.0, e, e, 1.0);
                }
                let phi = self.priors.phi;
                let old = phi.ln_pdf(current) + self.noise_loglik(&self.r_y, &scatter, res.len());
                let new = phi.ln_pdf(proposal) + self.noise_loglik(&r_new, &scatter, res.len());
                if Self::accept(new - old, rng) {
                    self.state.phi_y = proposal;
                    self.r_y = r_new;
                    accepted = true;
                }
            }
        }
        self.accept.record("phi_y".to_string(), accepted);
        Ok(())
    }

    /// One full sweep: per period atoms then assignments, the scale
    /// parameters, the overall means, then the Metropolis-Hastings block.
    pub fn sweep<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        let m = self.data.n_periods();
        for l in 0..m {
            let stats = self.item_stats(l);
            self.update_atoms(l, &stats, rng)?;
            self.update_assignments(l, &stats, rng)?;
        }
        self.update_eta_y(rng)?;
        for l in 0..m {
            self.update_eta_theta(l, rng)?;
        }
        for l in 0..m {
            self.update_m_theta(l, rng)?;
        }
        for l in 0..m {
            self.mh_tau(l, rng)?;
            self.mh_alpha(l, rng)?;
            self.mh_beta(l, rng)?;
            self.mh_phi_theta(l, rng)?;
        }
        self.mh_phi_y(rng)
    }
}
