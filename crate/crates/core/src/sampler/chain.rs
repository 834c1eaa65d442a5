//! Running a chain and summarizing its draws.

use std::collections::BTreeMap;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::config::ChainConfig;
use super::diagnostics::{accumulate_coclustering, effective_sample_size, point_partition_index};
use super::gibbs::Sampler;
use super::priors::HyperPriors;
use super::state::McmcState;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::spatiotemporal::FunctionalDataset;
use crate::util::substream;

/// Scalar parameters of one period in one recorded draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodDraw {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub tau: Option<f64>,
    pub eta_theta: f64,
    pub phi_theta: f64,
    /// Cluster means at the configured record points, one row per cluster.
    pub atoms_at_points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Draw {
    /// Zero-based sweep index, counting burn-in.
    pub sweep: usize,
    pub eta_y: f64,
    pub phi_y: f64,
    pub periods: Vec<PeriodDraw>,
}

/// Posterior summary of one period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodSummary {
    pub name: String,
    /// Canonical labels of every recorded partition.
    pub partitions: Vec<Vec<usize>>,
    /// Posterior co-clustering frequencies, row-major n x n.
    pub coclustering: Vec<f64>,
    /// Binder-loss point estimate (canonical labels) and its draw index.
    pub point_partition: Option<Vec<usize>>,
    pub point_draw: Option<usize>,
    /// Posterior mean of each area's cluster mean function.
    pub mean_curves: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSummary {
    pub chain: u64,
    pub config: ChainConfig,
    pub priors: HyperPriors,
    /// True when assignment conditionals used the treat-as-last approximation.
    pub approximate_conditional: bool,
    pub n_areas: usize,
    pub grid: Vec<f64>,
    pub draws: Vec<Draw>,
    pub periods: Vec<PeriodSummary>,
    /// Effective sample sizes of the scalar traces (at least 10 draws).
    pub ess: BTreeMap<String, f64>,
    pub acceptance: BTreeMap<String, f64>,
}

impl ChainSummary {
    /// Named scalar traces, in a fixed order.
    pub fn traces(&self) -> BTreeMap<String, Vec<f64>> {
        let mut out: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for d in &self.draws {
            out.entry("eta_y".into()).or_default().push(d.eta_y);
            out.entry("phi_y".into()).or_default().push(d.phi_y);
            for (l, p) in d.periods.iter().enumerate() {
                out.entry(format!("k[{l}]")).or_default().push(p.k as f64);
                out.entry(format!("alpha[{l}]")).or_default().push(p.alpha);
                out.entry(format!("beta[{l}]")).or_default().push(p.beta);
                if let Some(t) = p.tau {
                    out.entry(format!("tau[{l}]")).or_default().push(t);
                }
                out.entry(format!("eta_theta[{l}]")).or_default().push(p.eta_theta);
                out.entry(format!("phi_theta[{l}]")).or_default().push(p.phi_theta);
            }
        }
        out
    }

    /// Recorded partitions of a period.
    pub fn partitions(&self, period: usize) -> Vec<Partition> {
        self.periods[period]
            .partitions
            .iter()
            .map(|l| Partition::from_canonical(l.clone()).expect("recorded labels are canonical"))
            .collect()
    }

    pub fn point_partition(&self, period: usize) -> Option<Partition> {
        self.periods[period]
            .point_partition
            .as_ref()
            .map(|l| Partition::from_canonical(l.clone()).expect("recorded labels are canonical"))
    }

    pub fn mean_curves(&self, period: usize) -> Vec<DVector<f64>> {
        self.periods[period]
            .mean_curves
            .iter()
            .map(|c| DVector::from_vec(c.clone()))
            .collect()
    }
}

fn record(state: &McmcState, sweep: usize, points: &[usize]) -> Draw {
    Draw {
        sweep,
        eta_y: state.eta_y,
        phi_y: state.phi_y,
        periods: state
            .periods
            .iter()
            .map(|p| PeriodDraw {
                k: p.n_clusters(),
                alpha: p.alpha,
                beta: p.beta,
                tau: p.tau,
                eta_theta: p.eta_theta,
                phi_theta: p.phi_theta,
                atoms_at_points: p
                    .atoms
                    .iter()
                    .map(|a| points.iter().map(|&x| a[x]).collect())
                    .collect(),
            })
            .collect(),
    }
}

/// Runs chain 0. See [`run_chain_indexed`].
pub fn run_chain(data: &FunctionalDataset, priors: &HyperPriors, config: &ChainConfig) -> Result<ChainSummary> {
    run_chain_indexed(data, priors, config, 0)
}

/// Runs `burn_in + samples` sweeps from the default starting state, keeping
/// every `thin`-th post-burn-in sweep. Sweep `s` of chain `c` draws from the
/// substream `(seed, c, s + 1)`; substream 0 is reserved for initialization.
pub fn run_chain_indexed(
    data: &FunctionalDataset,
    priors: &HyperPriors,
    config: &ChainConfig,
    chain: u64,
) -> Result<ChainSummary> {
    let sampler = Sampler::new(data, priors, config)?;
    run_sampler(sampler, chain)
}

/// Runs a prepared sampler (for instance from a custom starting state).
pub fn run_sampler(mut sampler: Sampler<'_>, chain: u64) -> Result<ChainSummary> {
    let config = sampler.config().clone();
    let data = sampler.data();
    let (n, d, m) = (data.n_areas(), data.dim(), data.n_periods());
    let grid = data.grid().to_vec();
    let names = data.design().names().to_vec();
    let total = config.burn_in + config.samples;
    let mut draws = Vec::with_capacity(config.n_draws());
    let mut partitions: Vec<Vec<Vec<usize>>> = vec![Vec::new(); m];
    let mut cocluster = vec![vec![0.0; n * n]; m];
    let mut mean_sums = vec![vec![DVector::<f64>::zeros(d); n]; m];
    for s in 0..total {
        let mut rng = substream(config.seed, chain, s as u64 + 1);
        sampler
            .sweep(&mut rng)
            .map_err(|e| Error::AtSweep { sweep: s, source: Box::new(e) })?;
        if s >= config.burn_in && (s - config.burn_in + 1).is_multiple_of(config.thin) {
            let state = sampler.state();
            draws.push(record(state, s, &config.record_points));
            for (l, p) in state.periods.iter().enumerate() {
                partitions[l].push(p.z.labels().to_vec());
                accumulate_coclustering(&mut cocluster[l], &p.z);
                for (i, sum) in mean_sums[l].iter_mut().enumerate() {
                    *sum += &p.atoms[p.z.label(i)];
                }
            }
        }
    }
    let n_draws = draws.len();
    let periods = (0..m)
        .map(|l| {
            let scale = if n_draws > 0 { 1.0 / n_draws as f64 } else { 0.0 };
            let parts: Vec<Partition> = partitions[l]
                .iter()
                .map(|z| Partition::from_canonical(z.clone()).expect("sampler keeps labels canonical"))
                .collect();
            let point = if parts.is_empty() { None } else { Some(point_partition_index(&parts)?) };
            Ok(PeriodSummary {
                name: names[l].clone(),
                point_partition: point.map(|p| partitions[l][p].clone()),
                point_draw: point,
                partitions: std::mem::take(&mut partitions[l]),
                coclustering: cocluster[l].iter().map(|v| v * scale).collect(),
                mean_curves: mean_sums[l]
                    .iter()
                    .map(|c| (c * scale).iter().copied().collect())
                    .collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut summary = ChainSummary {
        chain,
        approximate_conditional: config.conditional_mode.is_approximate(),
        priors: sampler.priors().clone(),
        config,
        n_areas: n,
        grid,
        draws,
        periods,
        ess: BTreeMap::new(),
        acceptance: sampler.acceptance().rates(),
    };
    if n_draws >= 10 {
        summary.ess = summary
            .traces()
            .into_iter()
            .map(|(k, v)| (k, effective_sample_size(&v)))
            .collect();
    }
    Ok(summary)
}
