//! Monte Carlo minima of M unit Gaussians against the closed-form mean and
//! spread of the sample minimum.

use super::{headers, mean_std, tags, Artifacts};
use crate::config::Resolved;
use crate::csvio::Field::{self, F, S, U};
use crate::errors::CliError;
use crossquad_core::{derive_seed, predict_min_of_m, sample_gaussian_minima, PredictionOrder};
use serde_json::json;

pub fn run(cfg: &Resolved) -> Result<Artifacts, CliError> {
    let seed = derive_seed(cfg.seed, 0, tags::LEMMA2_SAMPLER);
    let minima: Vec<f64> =
        sample_gaussian_minima(0.0, 1.0, cfg.m, cfg.replicas as usize, seed)?;
    let leading = predict_min_of_m(0.0, 1.0, cfg.m, PredictionOrder::Leading)?;
    let first = predict_min_of_m(0.0, 1.0, cfg.m, PredictionOrder::FirstOrder)?;

    let header = headers(&[
        "experiment",
        "replica",
        "m",
        "min_measured",
        "min_mean_predicted",
        "min_std_predicted",
    ]);
    let rows: Vec<Vec<Field>> = minima
        .iter()
        .enumerate()
        .map(|(rep, &v)| {
            vec![
                S("lemma2".into()),
                U(rep as u64),
                U(cfg.m),
                F(v),
                F(first.mean),
                F(first.std),
            ]
        })
        .collect();

    let (mean, std) = mean_std(&minima);
    Ok(Artifacts {
        header,
        rows,
        summary: json!({
            "experiment": "lemma2",
            "seed": cfg.seed,
            "m": cfg.m,
            "replicas": cfg.replicas,
            "min_mean_measured": mean,
            "min_std_measured": std,
            "min_mean_predicted_leading": leading.mean,
            "min_mean_predicted_first_order": first.mean,
            "min_std_predicted": first.std,
            "mean_rel_gap_vs_first_order": (mean - first.mean).abs() / first.mean.abs(),
            "std_rel_gap": (std - first.std).abs() / first.std,
        }),
        side: None,
    })
}
