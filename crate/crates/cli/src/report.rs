use std::collections::BTreeMap;

use anyhow::{Context, Result};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use sgdp_core::metrics::{rmse, LabeledPartitionPair};
use sgdp_core::partition::Partition;

use crate::files::{invalid, read_json, write_json};
use crate::fit::{chain_dir, FitSummary, MeanRow, Percentiles, RunManifest, QUANTILES};
use crate::simulate::Truth;
use crate::{MetricsArgs, SummarizeArgs};

#[derive(Debug, Serialize, Deserialize)]
pub struct Metrics {
    pub chain: u64,
    pub period: String,
    pub ari: f64,
    pub purity: f64,
    pub rmse: f64,
}

fn read_means(path: &std::path::Path, period: &str, n: usize) -> Result<Vec<DVector<f64>>> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut curves: Vec<Vec<f64>> = vec![Vec::new(); n];
    for row in rdr.deserialize() {
        let row: MeanRow = row.with_context(|| format!("parsing {}", path.display()))?;
        if row.period != period {
            continue;
        }
        let c = curves
            .get_mut(row.area_id)
            .ok_or_else(|| invalid(format!("area {} out of range in {}", row.area_id, path.display())))?;
        if c.len() != row.hour_index {
            return Err(invalid(format!("{} is not sorted by hour", path.display())));
        }
        c.push(row.value);
    }
    Ok(curves.into_iter().map(DVector::from_vec).collect())
}

pub fn metrics(args: &MetricsArgs) -> Result<()> {
    let truth: Truth = read_json(&args.truth)?;
    let dir = chain_dir(&args.data, args.chain);
    let summary: FitSummary = read_json(&dir.join("summary.json"))?;
    let period = summary
        .periods
        .get(args.period)
        .ok_or_else(|| invalid(format!("fit has no period {}", args.period)))?;
    let estimate = period
        .point_partition
        .as_ref()
        .ok_or_else(|| invalid("fit recorded no draws, so there is no point partition"))?;
    let truth_z = Partition::from_one_based(&truth.labels)?;
    let estimate_z = Partition::from_one_based(estimate)?;
    let pair = LabeledPartitionPair::new(&truth_z, &estimate_z)?;
    let means = read_means(&dir.join("means.csv"), &period.name, truth.labels.len())?;
    let true_means: Vec<DVector<f64>> = truth.true_means.iter().map(|c| DVector::from_vec(c.clone())).collect();
    let m = Metrics {
        chain: args.chain,
        period: period.name.clone(),
        ari: pair.adjusted_rand_index(),
        purity: pair.purity(),
        rmse: rmse(&means, &true_means)?,
    };
    println!("{}", serde_json::to_string_pretty(&m)?);
    if let Some(out) = &args.out {
        write_json(out, &m)?;
    }
    Ok(())
}

fn fmt_pct(name: &str, p: &Option<Percentiles>) -> String {
    match p {
        None => format!("  {name:<8} -"),
        Some(p) => {
            let q: Vec<String> = p.q.iter().map(|v| format!("{v:>9.4}")).collect();
            format!("  {name:<8} {:>9.4} {}", p.mean, q.join(" "))
        }
    }
}

pub fn summarize(args: &SummarizeArgs) -> Result<()> {
    let manifest: RunManifest = read_json(&args.data.join("manifest.json"))?;
    println!(
        "model {}  seed {}  chains {}  input {}",
        manifest.model,
        manifest.seed,
        manifest.chains,
        &manifest.input_hash[..12]
    );
    if manifest.approximate_conditional {
        println!("note: assignments used the approximate treat-as-last conditional");
    }
    let header: Vec<String> = QUANTILES.iter().map(|q| format!("{:>9}", format!("{}%", q * 100.0))).collect();
    let mut pooled: BTreeMap<String, BTreeMap<usize, f64>> = BTreeMap::new();
    for run in &manifest.chain_runs {
        let s: FitSummary = read_json(&chain_dir(&args.data, run.chain).join("summary.json"))?;
        println!("\nchain {} ({} draws, {:.1} s)", s.chain, s.n_draws, run.seconds);
        println!("  {:<8} {:>9} {}", "", "mean", header.join(" "));
        println!("{}", fmt_pct("eta_y", &s.eta_y));
        println!("{}", fmt_pct("phi_y", &s.phi_y));
        for p in &s.periods {
            println!(" period {}", p.name);
            println!("{}", fmt_pct("alpha", &p.alpha));
            println!("{}", fmt_pct("beta", &p.beta));
            println!("{}", fmt_pct("tau", &p.tau));
            let k: Vec<String> = p.k_distribution.iter().map(|(k, f)| format!("{k}:{f:.3}")).collect();
            println!("  K        {}", k.join(" "));
            let entry = pooled.entry(p.name.clone()).or_default();
            for (k, f) in &p.k_distribution {
                *entry.entry(*k).or_insert(0.0) += f / manifest.chain_runs.len() as f64;
            }
        }
        let ess: Vec<String> = s.ess.iter().map(|(k, v)| format!("{k} {v:.0}")).collect();
        println!("  ESS      {}", ess.join(", "));
        let acc: Vec<String> = s.acceptance.iter().map(|(k, v)| format!("{k} {v:.3}")).collect();
        println!("  accept   {}", acc.join(", "));
    }
    if manifest.chain_runs.len() > 1 {
        println!("\npooled K distribution");
        for (name, dist) in pooled {
            let k: Vec<String> = dist.iter().map(|(k, f)| format!("{k}:{f:.3}")).collect();
            println!("  {name:<12} {}", k.join(" "));
        }
    }
    Ok(())
}
