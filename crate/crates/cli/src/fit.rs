use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sgdp_core::sampler::{run_chain_indexed, ChainSummary, FitConfig, HyperPriors};
use sgdp_core::spatiotemporal::{read_dataset, FunctionalDataset, DATASET_FILES};
use statrs::statistics::{Data, OrderStatistics};

use crate::files::{blob_hash, create_dir, file_hash, invalid, read_json, tree_hash, write_json, write_json_atomic};
use crate::FitArgs;

pub const QUANTILES: [f64; 5] = [0.025, 0.25, 0.5, 0.75, 0.975];

/// Posterior quantiles at [`QUANTILES`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Percentiles {
    pub mean: f64,
    pub q: Vec<f64>,
}

impl Percentiles {
    fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let mut data = Data::new(values.to_vec());
        Some(Self {
            mean,
            q: QUANTILES.iter().map(|&p| data.quantile(p)).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub name: String,
    pub alpha: Option<Percentiles>,
    pub beta: Option<Percentiles>,
    pub tau: Option<Percentiles>,
    /// Posterior frequency of each cluster count.
    pub k_distribution: BTreeMap<usize, f64>,
    /// 1-based Binder-loss point partition and the draw it was taken from.
    pub point_partition: Option<Vec<usize>>,
    pub point_draw: Option<usize>,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub chain: u64,
    pub model: String,
    pub approximate_conditional: bool,
    pub n_draws: usize,
    pub quantiles: Vec<f64>,
    pub eta_y: Option<Percentiles>,
    pub phi_y: Option<Percentiles>,
    pub periods: Vec<PeriodReport>,
    pub ess: BTreeMap<String, f64>,
    pub acceptance: BTreeMap<String, f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ChainRecord {
    pub chain: u64,
    pub dir: String,
    pub seconds: f64,
    pub ess: BTreeMap<String, f64>,
    pub acceptance: BTreeMap<String, f64>,
}

/// Everything needed to repeat a fit.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config: FitConfig,
    pub seed: u64,
    pub model: String,
    pub standardize: bool,
    pub chains: usize,
    pub data_dir: String,
    /// Content hashes of the input files and their combination.
    pub input_hashes: BTreeMap<String, String>,
    pub input_hash: String,
    pub approximate_conditional: bool,
    pub wall_clock_seconds: f64,
    pub chain_runs: Vec<ChainRecord>,
}

fn load_config(args: &FitArgs) -> Result<FitConfig> {
    let mut config: FitConfig = match &args.config {
        Some(p) => read_json(p)?,
        None => FitConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.chain.seed = seed;
    }
    if let Some(model) = args.model {
        config.chain.model = model;
    }
    if let Some(name) = &args.priors {
        config.priors = HyperPriors::by_name(name)?;
    }
    config.chain.validate()?;
    config.priors.validate()?;
    Ok(config)
}

fn hash_inputs(args: &FitArgs, config: &FitConfig) -> Result<(BTreeMap<String, String>, String)> {
    let mut hashes = BTreeMap::new();
    for name in DATASET_FILES {
        hashes.insert(name.to_string(), file_hash(&args.data.join(name))?);
    }
    hashes.insert("config".into(), blob_hash(serde_json::to_string(config)?.as_bytes()));
    hashes.insert("standardize".into(), blob_hash(args.standardize.to_string().as_bytes()));
    let all = tree_hash(hashes.iter().map(|(k, v)| (k.as_str(), v.as_str())));
    Ok((hashes, all))
}

pub fn run(args: &FitArgs) -> Result<()> {
    if args.chains == 0 {
        return Err(invalid("--chains must be at least 1"));
    }
    let config = load_config(args)?;
    let mut data = read_dataset(&args.data)?;
    if args.standardize {
        data = data.standardize()?;
    }
    let (input_hashes, input_hash) = hash_inputs(args, &config)?;
    create_dir(&args.out)?;

    let start = Instant::now();
    let threads = args.threads.unwrap_or(args.chains).clamp(1, args.chains);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(u64, Result<ChainRecord>)>> = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let c = next.fetch_add(1, Ordering::SeqCst);
                if c >= args.chains {
                    break;
                }
                let r = run_one(&data, &config, c as u64, &args.out);
                results.lock().unwrap().push((c as u64, r));
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|r| r.0);
    let mut chain_runs = Vec::with_capacity(results.len());
    for (c, r) in results {
        chain_runs.push(r.with_context(|| format!("chain {c}"))?);
    }

    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        seed: config.chain.seed,
        model: config.chain.model.to_string(),
        approximate_conditional: config.chain.conditional_mode.is_approximate(),
        config,
        standardize: args.standardize,
        chains: args.chains,
        data_dir: args.data.display().to_string(),
        input_hashes,
        input_hash,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        chain_runs,
    };
    write_json_atomic(&args.out.join("manifest.json"), &manifest)?;
    eprintln!("wrote {} chain(s) to {}", args.chains, args.out.display());
    Ok(())
}

pub fn chain_dir(out: &Path, chain: u64) -> PathBuf {
    out.join(format!("chain_{chain}"))
}

fn run_one(data: &FunctionalDataset, config: &FitConfig, chain: u64, out: &Path) -> Result<ChainRecord> {
    let start = Instant::now();
    let summary = run_chain_indexed(data, &config.priors, &config.chain, chain)?;
    let seconds = start.elapsed().as_secs_f64();
    let dir = chain_dir(out, chain);
    create_dir(&dir)?;
    write_draws(&dir.join("draws.csv"), &summary)?;
    write_partitions(&dir.join("partitions.csv"), &summary)?;
    write_means(&dir.join("means.csv"), &summary)?;
    if !summary.config.record_points.is_empty() {
        write_atoms(&dir.join("atoms.csv"), &summary)?;
    }
    write_json(&dir.join("summary.json"), &summarize(&summary))?;
    Ok(ChainRecord {
        chain,
        dir: dir.display().to_string(),
        seconds,
        ess: summary.ess.clone(),
        acceptance: summary.acceptance.clone(),
    })
}

pub fn summarize(s: &ChainSummary) -> FitSummary {
    let traces = s.traces();
    let pct = |name: &str| traces.get(name).and_then(|t| Percentiles::of(t));
    let periods = s
        .periods
        .iter()
        .enumerate()
        .map(|(l, p)| {
            let mut k_distribution = BTreeMap::new();
            for d in &s.draws {
                *k_distribution.entry(d.periods[l].k).or_insert(0.0) += 1.0 / s.draws.len() as f64;
            }
            PeriodReport {
                name: p.name.clone(),
                alpha: pct(&format!("alpha[{l}]")),
                beta: pct(&format!("beta[{l}]")),
                tau: pct(&format!("tau[{l}]")),
                k_distribution,
                point_partition: s.point_partition(l).map(|z| z.one_based()),
                point_draw: p.point_draw,
            }
        })
        .collect();
    FitSummary {
        chain: s.chain,
        model: s.config.model.to_string(),
        approximate_conditional: s.approximate_conditional,
        n_draws: s.draws.len(),
        quantiles: QUANTILES.to_vec(),
        eta_y: pct("eta_y"),
        phi_y: pct("phi_y"),
        periods,
        ess: s.ess.clone(),
        acceptance: s.acceptance.clone(),
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))
}

/// One row per recorded draw with every scalar trace.
fn write_draws(path: &Path, s: &ChainSummary) -> Result<()> {
    let mut w = csv_writer(path)?;
    let has_tau = s.config.model.has_tau();
    let mut header = vec!["sweep".to_string(), "eta_y".into(), "phi_y".into()];
    for l in 0..s.periods.len() {
        header.extend([format!("k[{l}]"), format!("alpha[{l}]"), format!("beta[{l}]")]);
        if has_tau {
            header.push(format!("tau[{l}]"));
        }
        header.extend([format!("eta_theta[{l}]"), format!("phi_theta[{l}]")]);
    }
    w.write_record(&header)?;
    for d in &s.draws {
        let mut row = vec![d.sweep.to_string(), d.eta_y.to_string(), d.phi_y.to_string()];
        for p in &d.periods {
            row.extend([p.k.to_string(), p.alpha.to_string(), p.beta.to_string()]);
            if has_tau {
                row.push(p.tau.map(|t| t.to_string()).unwrap_or_default());
            }
            row.extend([p.eta_theta.to_string(), p.phi_theta.to_string()]);
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per (draw, period) with 1-based area labels.
fn write_partitions(path: &Path, s: &ChainSummary) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["sweep".to_string(), "period".into()];
    header.extend((0..s.n_areas).map(|i| format!("area_{i}")));
    w.write_record(&header)?;
    for p in &s.periods {
        for (d, labels) in s.draws.iter().zip(&p.partitions) {
            let mut row = vec![d.sweep.to_string(), p.name.clone()];
            row.extend(labels.iter().map(|z| (z + 1).to_string()));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Row of `means.csv`.
#[derive(Debug, Serialize, Deserialize)]
pub struct MeanRow {
    pub period: String,
    pub area_id: usize,
    /// 1-based cluster of the area in the point partition.
    pub cluster: usize,
    pub hour_index: usize,
    pub value: f64,
}

/// Posterior mean curve of each area, tagged with its point-partition cluster.
fn write_means(path: &Path, s: &ChainSummary) -> Result<()> {
    let mut w = csv_writer(path)?;
    for (l, p) in s.periods.iter().enumerate() {
        let point = s.point_partition(l);
        for (i, curve) in p.mean_curves.iter().enumerate() {
            for (h, &value) in curve.iter().enumerate() {
                w.serialize(MeanRow {
                    period: p.name.clone(),
                    area_id: i,
                    cluster: point.as_ref().map_or(0, |z| z.label(i) + 1),
                    hour_index: h,
                    value,
                })?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Cluster means at the recorded grid points.
fn write_atoms(path: &Path, s: &ChainSummary) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["sweep", "period", "cluster", "hour_index", "value"])?;
    for d in &s.draws {
        for (p, name) in d.periods.iter().zip(s.periods.iter().map(|p| &p.name)) {
            for (j, row) in p.atoms_at_points.iter().enumerate() {
                for (&x, v) in s.config.record_points.iter().zip(row) {
                    w.write_record([d.sweep.to_string(), name.clone(), (j + 1).to_string(), x.to_string(), v.to_string()])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}
