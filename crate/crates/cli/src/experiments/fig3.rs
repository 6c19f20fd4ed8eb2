//! Bias sweep on raw-state selection crossover: draw M uniform parents,
//! cross the two lowest-cost ones at each bias, sample M offspring, and
//! compare measured offspring statistics with the closed-form forecasts.

use super::{headers, mean_std, sweep_grid, tags, two_lowest, Artifacts};
use crate::config::{GammaChoice, Resolved};
use crate::csvio::Field::{self, F, S, U};
use crate::errors::CliError;
use crossquad_core::{
    biased_pair_weights, derive_seed, large_n_crossover_norm, offspring_mean, optimal_gamma,
    pair_plan, sample_offspring, uniform_states, BitState, PolyCost, WeightDist,
};
use rayon::prelude::*;
use serde_json::json;

pub(crate) struct GammaPoint {
    pub gamma: f64,
    pub l_norm: f64,
    pub l_norm_large_n: f64,
    pub mu_y: f64,
    pub mu_y_pred: f64,
    pub sigma_y: f64,
    pub sigma_y_pred: f64,
    pub min_y: f64,
    pub min_y_pred: f64,
    pub deviation_ratio: f64,
}

pub(crate) struct Replica {
    pub mu_x: f64,
    pub sigma_x: f64,
    pub min_x: f64,
    pub points: Vec<GammaPoint>,
}

/// One replica of the sweep: shared parent pool, one offspring batch per
/// bias value.
pub(crate) fn run_replica(
    cost: &PolyCost<f64>,
    m: usize,
    gammas: &[f64],
    parent_seed: u64,
    offspring_seed_of: impl Fn(usize) -> u64,
) -> Result<Replica, CliError> {
    let n = cost.n_dims();
    let parents = uniform_states(n, m, parent_seed)?;
    let parent_costs: Vec<f64> = parents
        .par_iter()
        .map(|x| cost.evaluate(x))
        .collect::<Result<_, _>>()?;
    let (mu_x, sigma_x) = mean_std(&parent_costs);
    let min_x = parent_costs.iter().copied().fold(f64::INFINITY, f64::min);
    let (best, second) = two_lowest(&parent_costs);
    let disagreement =
        parents[best].hamming_distance(&parents[second])? as f64 / n as f64;

    let mut points = Vec::with_capacity(gammas.len());
    for (gi, &gamma) in gammas.iter().enumerate() {
        let weights = if gamma > 0.0 {
            biased_pair_weights(&parent_costs, gamma)?
        } else {
            WeightDist::one_hot(m, best)?
        };
        let plan = offspring_mean(&parents, &weights)?;
        let l_norm: f64 = cost.mean_vector_norm(plan.mean())?;
        let l_norm_large_n = large_n_crossover_norm(n, cost.degree(), gamma, disagreement)?;

        let weighted_parent_cost =
            (1.0 - gamma) * parent_costs[best] + gamma * parent_costs[second];
        let mu_y_pred = l_norm * weighted_parent_cost;
        let sigma_y_pred = (1.0 - l_norm * l_norm).max(0.0).sqrt();
        let min_y_pred = mu_y_pred - (2.0 * (m as f64).ln()).sqrt() * sigma_y_pred;

        let offspring = sample_offspring(&plan, m, offspring_seed_of(gi))?;
        let offspring_costs: Vec<f64> = offspring
            .par_iter()
            .map(|y| cost.evaluate(y))
            .collect::<Result<_, _>>()?;
        let (mu_y, sigma_y) = mean_std(&offspring_costs);
        let min_y = offspring_costs.iter().copied().fold(f64::INFINITY, f64::min);
        let deviation_ratio = (mu_x - min_y) / (mu_x - min_x);

        points.push(GammaPoint {
            gamma,
            l_norm,
            l_norm_large_n,
            mu_y,
            mu_y_pred,
            sigma_y,
            sigma_y_pred,
            min_y,
            min_y_pred,
            deviation_ratio,
        });
    }
    Ok(Replica {
        mu_x,
        sigma_x,
        min_x,
        points,
    })
}

/// The bias that drives this parent pair's exact mean-vector norm to
/// 1/sqrt(2). Zero bias concentrates the offspring on the best parent,
/// where the norm is exactly 1.
pub(crate) fn auto_gamma(
    cost: &PolyCost<f64>,
    parents: &[BitState],
    parent_costs: &[f64],
) -> Result<f64, CliError> {
    let g = optimal_gamma(
        |g: f64| {
            if g <= 0.0 {
                return 1.0;
            }
            let plan = pair_plan(parents, parent_costs, g).expect("two parents and a valid bias");
            cost.mean_vector_norm(plan.mean())
                .expect("plan entries stay in [-1,1]")
        },
        1e-6,
    )?;
    Ok(g)
}

pub fn run(cfg: &Resolved) -> Result<Artifacts, CliError> {
    let n = cfg.n[0];
    let k = cfg.k[0];
    let m = cfg.m as usize;
    let header = headers(&[
        "experiment",
        "replica",
        "n",
        "k",
        "m",
        "gamma",
        "l_norm",
        "l_norm_large_n",
        "mu_X_measured",
        "sigma_X_measured",
        "min_X_measured",
        "mu_Y_measured",
        "mu_Y_predicted",
        "sigma_Y_measured",
        "sigma_Y_predicted",
        "min_Y_measured",
        "min_Y_predicted",
        "deviation_ratio",
    ]);

    let mut rows: Vec<Vec<Field>> = Vec::new();
    let mut replicas = Vec::with_capacity(cfg.replicas as usize);
    for rep in 0..cfg.replicas {
        let cost = PolyCost::<f64>::generate(n, k, derive_seed(cfg.seed, rep, tags::FIG3_COST))?;
        let parent_seed = derive_seed(cfg.seed, rep, tags::FIG3_PARENTS);

        let gammas: Vec<f64> = match cfg.gamma {
            None => sweep_grid(21),
            Some(GammaChoice::Value(g)) => vec![g],
            Some(GammaChoice::Auto) => {
                let parents = uniform_states(n, m, parent_seed)?;
                let parent_costs: Vec<f64> = parents
                    .par_iter()
                    .map(|x| cost.evaluate(x))
                    .collect::<Result<_, _>>()?;
                vec![auto_gamma(&cost, &parents, &parent_costs)?]
            }
        };

        let replica = run_replica(&cost, m, &gammas, parent_seed, |gi| {
            derive_seed(cfg.seed, rep, tags::FIG3_OFFSPRING_BASE + gi as u64)
        })?;

        for p in &replica.points {
            rows.push(vec![
                S("fig3".into()),
                U(rep),
                U(n as u64),
                U(k as u64),
                U(cfg.m),
                F(p.gamma),
                F(p.l_norm),
                F(p.l_norm_large_n),
                F(replica.mu_x),
                F(replica.sigma_x),
                F(replica.min_x),
                F(p.mu_y),
                F(p.mu_y_pred),
                F(p.sigma_y),
                F(p.sigma_y_pred),
                F(p.min_y),
                F(p.min_y_pred),
                F(p.deviation_ratio),
            ]);
        }
        replicas.push(replica);
    }

    // Aggregate across replicas at each grid position (biases may differ
    // per replica under the automatic choice, so report their mean too).
    let grid_len = replicas[0].points.len();
    let mut per_gamma = Vec::with_capacity(grid_len);
    for gi in 0..grid_len {
        let col = |f: &dyn Fn(&GammaPoint) -> f64| -> (f64, f64) {
            let vals: Vec<f64> = replicas.iter().map(|r| f(&r.points[gi])).collect();
            mean_std(&vals)
        };
        let (gamma_mean, _) = col(&|p| p.gamma);
        let (l_mean, _) = col(&|p| p.l_norm);
        let (l_large_mean, _) = col(&|p| p.l_norm_large_n);
        let (mu_y, _) = col(&|p| p.mu_y);
        let (mu_y_pred, _) = col(&|p| p.mu_y_pred);
        let (sig_y, _) = col(&|p| p.sigma_y);
        let (sig_y_pred, _) = col(&|p| p.sigma_y_pred);
        let (min_y, _) = col(&|p| p.min_y);
        let (min_y_pred, _) = col(&|p| p.min_y_pred);
        let (dev_mean, dev_std) = col(&|p| p.deviation_ratio);
        per_gamma.push(json!({
            "gamma_mean": gamma_mean,
            "l_norm_mean": l_mean,
            "l_norm_large_n_mean": l_large_mean,
            "mu_Y_measured_mean": mu_y,
            "mu_Y_predicted_mean": mu_y_pred,
            "sigma_Y_measured_mean": sig_y,
            "sigma_Y_predicted_mean": sig_y_pred,
            "min_Y_measured_mean": min_y,
            "min_Y_predicted_mean": min_y_pred,
            "deviation_ratio_mean": dev_mean,
            "deviation_ratio_std": dev_std,
        }));
    }

    Ok(Artifacts {
        header,
        rows,
        summary: json!({
            "experiment": "fig3",
            "seed": cfg.seed,
            "n": n,
            "k": k,
            "m": cfg.m,
            "replicas": cfg.replicas,
            "per_gamma": per_gamma,
        }),
        side: None,
    })
}
