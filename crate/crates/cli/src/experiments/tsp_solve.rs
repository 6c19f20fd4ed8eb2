//! Tour search on one instance, read from a file or generated, through the
//! descend/cross/descend pipeline.

use super::fig4::{require_gamma_value, result_row, trajectory_rows, RESULT_HEADER, TRAJECTORY_HEADER};
use super::{headers, tags, Artifacts, SideFile};
use crate::config::Resolved;
use crate::csvio::Field;
use crate::errors::CliError;
use crossquad_core::{derive_seed, generate_instance, read_instance, run_tsp_pipeline};
use serde_json::json;

pub fn run(cfg: &Resolved) -> Result<Artifacts, CliError> {
    let gamma = require_gamma_value(cfg, "tsp-solve")?;
    let m = cfg.m as usize;
    let inst = match &cfg.instance {
        Some(path) => read_instance(path)?,
        None => generate_instance(cfg.cities, derive_seed(cfg.seed, 0, tags::TSP_INSTANCE))?,
    };
    let cities = inst.n_cities();

    let mut rows: Vec<Vec<Field>> = Vec::new();
    let mut traj_rows: Vec<Vec<Field>> = Vec::new();
    let mut best: Option<(f64, Vec<u32>, u64)> = None;
    let mut per_replica = Vec::new();
    for rep in 0..cfg.replicas {
        let res = run_tsp_pipeline(
            &inst,
            m,
            gamma,
            cfg.pool_size,
            derive_seed(cfg.seed, rep, tags::TSP_PIPELINE),
        )?;
        rows.push(result_row("tsp-solve", rep, cities, cfg.m, &res));
        trajectory_rows("tsp-solve", rep, &res, &mut traj_rows);

        let (len, tour) = if res.best_offspring_length <= res.best_parent_length {
            (res.best_offspring_length, &res.best_offspring)
        } else {
            (res.best_parent_length, &res.best_parent)
        };
        per_replica.push(json!({
            "replica": rep,
            "best_length": len,
            "best_parent_length": res.best_parent_length,
            "best_offspring_length": res.best_offspring_length,
            "improved": res.best_offspring_length < res.best_parent_length,
        }));
        if best.as_ref().is_none_or(|(l, _, _)| len < *l) {
            best = Some((len, tour.order().to_vec(), rep));
        }
    }
    let (best_length, best_order, best_replica) = best.expect("at least one replica");

    Ok(Artifacts {
        header: headers(RESULT_HEADER),
        rows,
        summary: json!({
            "experiment": "tsp-solve",
            "seed": cfg.seed,
            "cities": cities,
            "m": cfg.m,
            "gamma": gamma,
            "pool_size": cfg.pool_size,
            "replicas": cfg.replicas,
            "instance": cfg.instance.as_ref().map(|p| p.display().to_string()),
            "best_length": best_length,
            "best_replica": best_replica,
            "best_tour": best_order,
            "per_replica": per_replica,
        }),
        side: Some(SideFile {
            suffix: "trajectories",
            header: headers(TRAJECTORY_HEADER),
            rows: traj_rows,
        }),
    })
}
