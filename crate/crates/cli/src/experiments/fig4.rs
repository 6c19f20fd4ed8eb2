//! Tour-search batch: random planar instances, M two-opt descents from
//! random tours, route crossover of pool leaders, M offspring descents,
//! reported on standardized tour lengths.

use super::{headers, mean_std, tags, Artifacts, SideFile};
use crate::config::{GammaChoice, Resolved};
use crate::csvio::Field::{self, F, S, U};
use crate::errors::CliError;
use crossquad_core::{derive_seed, generate_instance, run_tsp_pipeline, TspRunResult};
use serde_json::json;

pub(crate) fn require_gamma_value(cfg: &Resolved, what: &str) -> Result<f64, CliError> {
    match cfg.gamma {
        Some(GammaChoice::Value(g)) => Ok(g),
        Some(GammaChoice::Auto) => Err(CliError::Config(format!(
            "{what} has no closed-form bias tuning; pass --gamma <value>"
        ))),
        None => Err(CliError::Config(format!(
            "{what} needs a bias; pass --gamma <value>"
        ))),
    }
}

pub(crate) fn result_row(label: &str, rep: u64, cities: usize, m: u64, res: &TspRunResult) -> Vec<Field> {
    let s = &res.summary;
    let deviation_ratio = (s.parent_mean - s.offspring_min) / (s.parent_mean - s.parent_min);
    vec![
        S(label.into()),
        U(rep),
        U(cities as u64),
        U(m),
        F(s.gamma),
        F(s.parent_mean),
        F(s.parent_std),
        F(s.parent_min),
        F(s.offspring_mean),
        F(s.offspring_std),
        F(s.offspring_min),
        F(s.l_norm),
        F(deviation_ratio),
        F(res.best_parent_length),
        F(res.best_offspring_length),
        U(u64::from(res.best_offspring_length < res.best_parent_length)),
    ]
}

pub(crate) const RESULT_HEADER: &[&str] = &[
    "experiment",
    "replica",
    "cities",
    "m",
    "gamma",
    "mu_X_measured",
    "sigma_X_measured",
    "min_X_measured",
    "mu_Y_measured",
    "sigma_Y_measured",
    "min_Y_measured",
    "l_norm_inferred",
    "deviation_ratio",
    "best_parent_length",
    "best_offspring_length",
    "improved",
];

pub(crate) fn trajectory_rows(label: &str, rep: u64, res: &TspRunResult, out: &mut Vec<Vec<Field>>) {
    for (step, (&p, &o)) in res
        .parent_running_min
        .iter()
        .zip(&res.offspring_running_min)
        .enumerate()
    {
        out.push(vec![
            S(label.into()),
            U(rep),
            U(step as u64),
            F(p),
            F(o),
        ]);
    }
}

pub(crate) const TRAJECTORY_HEADER: &[&str] = &[
    "experiment",
    "replica",
    "step",
    "parent_running_min",
    "offspring_running_min",
];

pub fn run(cfg: &Resolved) -> Result<Artifacts, CliError> {
    if cfg.instance.is_some() {
        return Err(CliError::Config(
            "fig4 generates its own instances; use tsp-solve to run one from a file".into(),
        ));
    }
    let gamma = require_gamma_value(cfg, "fig4")?;
    let m = cfg.m as usize;

    let mut rows: Vec<Vec<Field>> = Vec::new();
    let mut traj_rows: Vec<Vec<Field>> = Vec::new();
    let mut ratios = Vec::new();
    let mut improved = 0usize;
    for rep in 0..cfg.replicas {
        let inst = generate_instance(cfg.cities, derive_seed(cfg.seed, rep, tags::FIG4_INSTANCE))?;
        let res = run_tsp_pipeline(
            &inst,
            m,
            gamma,
            cfg.pool_size,
            derive_seed(cfg.seed, rep, tags::FIG4_PIPELINE),
        )?;
        let s = &res.summary;
        ratios.push((s.parent_mean - s.offspring_min) / (s.parent_mean - s.parent_min));
        improved += usize::from(res.best_offspring_length < res.best_parent_length);
        rows.push(result_row("fig4", rep, cfg.cities, cfg.m, &res));
        trajectory_rows("fig4", rep, &res, &mut traj_rows);
    }

    let (ratio_mean, ratio_std) = mean_std(&ratios);
    Ok(Artifacts {
        header: headers(RESULT_HEADER),
        rows,
        summary: json!({
            "experiment": "fig4",
            "seed": cfg.seed,
            "cities": cfg.cities,
            "m": cfg.m,
            "gamma": gamma,
            "pool_size": cfg.pool_size,
            "replicas": cfg.replicas,
            "improved_count": improved,
            "deviation_ratio_mean": ratio_mean,
            "deviation_ratio_std": ratio_std,
        }),
        side: Some(SideFile {
            suffix: "trajectories",
            header: headers(TRAJECTORY_HEADER),
            rows: traj_rows,
        }),
    })
}
