//! Experiment implementations and shared output plumbing.
//!
//! Every experiment resolves its randomness from the master seed through
//! `derive_seed(master, replica, tag)` with the experiment-scoped tags
//! below, so any (config, seed) pair fixes every output byte, independent
//! of thread count or replica execution order.

pub mod fig1c;
pub mod fig2b;
pub mod fig3;
pub mod fig3e;
pub mod fig4;
pub mod lemma2;
pub mod predict;
pub mod tsp_solve;

use crate::config::{Experiment, Resolved};
use crate::csvio::{emit_csv, Field};
use crate::errors::CliError;
use std::path::{Path, PathBuf};

/// Stream tags, one block of 100 per experiment.
pub(crate) mod tags {
    pub const FIG1C_COST_BASE: u64 = 100; // + condition index
    pub const FIG2B_COST_BASE: u64 = 200; // + dimension index
    pub const FIG3_COST: u64 = 300;
    pub const FIG3_PARENTS: u64 = 301;
    pub const FIG3_OFFSPRING_BASE: u64 = 310; // + bias-grid index
    pub const FIG3E_COST: u64 = 400;
    pub const FIG3E_RUN: u64 = 410;
    pub const FIG4_INSTANCE: u64 = 500;
    pub const FIG4_PIPELINE: u64 = 501;
    pub const LEMMA2_SAMPLER: u64 = 600;
    pub const TSP_INSTANCE: u64 = 700;
    pub const TSP_PIPELINE: u64 = 701;
}

/// An extra CSV written next to the main one, named `<stem>_<suffix>.csv`.
pub struct SideFile {
    pub suffix: &'static str,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

/// Everything an experiment produces.
pub struct Artifacts {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Field>>,
    pub summary: serde_json::Value,
    pub side: Option<SideFile>,
}

pub fn dispatch(experiment: Experiment, cfg: &Resolved) -> Result<Artifacts, CliError> {
    match experiment {
        Experiment::Fig1c => fig1c::run(cfg),
        Experiment::Fig2b => fig2b::run(cfg),
        Experiment::Fig3 => fig3::run(cfg),
        Experiment::Fig3e => fig3e::run(cfg),
        Experiment::Fig4 => fig4::run(cfg),
        Experiment::Lemma2 => lemma2::run(cfg),
        Experiment::Predict => predict::run(cfg),
        Experiment::TspSolve => tsp_solve::run(cfg),
    }
}

/// Writes the CSV, the JSON summary beside it, and any side CSV; returns
/// the paths written.
pub fn write_artifacts(cfg: &Resolved, art: &Artifacts) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    emit_csv(&art.header, &art.rows, &cfg.out)?;
    written.push(cfg.out.clone());

    let json_path = cfg.out.with_extension("json");
    let text = serde_json::to_string_pretty(&art.summary)
        .map_err(|e| CliError::Resource(format!("serializing summary: {e}")))?;
    std::fs::write(&json_path, text + "\n")
        .map_err(|e| CliError::Resource(format!("writing {}: {e}", json_path.display())))?;
    written.push(json_path);

    if let Some(side) = &art.side {
        let path = side_path(&cfg.out, side.suffix);
        emit_csv(&side.header, &side.rows, &path)?;
        written.push(path);
    }
    Ok(written)
}

/// `.../fig4.csv` with suffix "trajectories" becomes
/// `.../fig4_trajectories.csv`.
pub fn side_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let ext = out
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".to_string());
    out.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

pub(crate) fn headers(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Mean and standard deviation (over n-1) of a sample.
pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Indices of the lowest and second-lowest cost (earliest index on ties).
pub(crate) fn two_lowest(costs: &[f64]) -> (usize, usize) {
    let mut best = 0usize;
    for (i, &c) in costs.iter().enumerate().skip(1) {
        if c < costs[best] {
            best = i;
        }
    }
    let mut second = usize::MAX;
    for (i, &c) in costs.iter().enumerate() {
        if i != best && (second == usize::MAX || c < costs[second]) {
            second = i;
        }
    }
    (best, second)
}

/// The bias grid swept when no --gamma is given.
pub(crate) fn sweep_grid(points: usize) -> Vec<f64> {
    let steps = points - 1;
    (0..=steps).map(|i| 0.5 * i as f64 / steps as f64).collect()
}
