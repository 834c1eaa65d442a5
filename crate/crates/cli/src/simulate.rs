use anyhow::Result;
use serde::{Deserialize, Serialize};
use sgdp_core::simdata::{generate, SimConfig, SnrLabels};
use sgdp_core::spatiotemporal::write_dataset;

use crate::files::{create_dir, read_json, write_json};
use crate::SimulateArgs;

/// Generating truth of a simulated dataset.
#[derive(Debug, Serialize, Deserialize)]
pub struct Truth {
    pub config: SimConfig,
    /// 1-based group of each area.
    pub labels: Vec<usize>,
    pub group_means: Vec<Vec<f64>>,
    /// Generating mean curve of each area.
    pub true_means: Vec<Vec<f64>>,
    pub snr: SnrLabels,
}

pub fn run(args: &SimulateArgs) -> Result<()> {
    let mut config: SimConfig = match &args.config {
        Some(p) => read_json(p)?,
        None => SimConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let sim = generate(&config)?;
    create_dir(&args.out)?;
    write_dataset(&args.out, &sim.data, &sim.tags)?;
    let truth = Truth {
        config,
        labels: sim.truth.one_based(),
        group_means: sim.group_means.iter().map(|v| v.as_slice().to_vec()).collect(),
        true_means: sim.true_means.iter().map(|v| v.as_slice().to_vec()).collect(),
        snr: sim.snr,
    };
    write_json(&args.out.join("truth.json"), &truth)?;
    eprintln!(
        "wrote {} areas x {} days x {} points to {}",
        sim.data.n_areas(),
        sim.data.n_days(),
        sim.data.dim(),
        args.out.display()
    );
    Ok(())
}
