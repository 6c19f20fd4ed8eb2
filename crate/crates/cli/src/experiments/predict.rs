//! Closed-form predictions at dimensions far beyond enumeration: expected
//! local-minimum count, the exhaustive-search time it implies, and the
//! global-minimum depth.

use super::{headers, Artifacts};
use crate::config::Resolved;
use crate::csvio::Field::{F, S, U};
use crate::errors::CliError;
use crossquad_core::{predict_global_min, predict_local_min_count, PredictionOrder};
use serde_json::json;

/// Wall-clock cost assumed per descent trial when converting a minimum
/// count into an exhaustive-search time.
const SECONDS_PER_TRIAL: f64 = 1e-4;
const SECONDS_PER_YEAR: f64 = 365.25 * 24.0 * 3600.0;

pub fn run(cfg: &Resolved) -> Result<Artifacts, CliError> {
    let n = cfg.n[0];
    // The trial count is the bare exponential base^N: how many descents an
    // exhaustive survey must pay for. The order-one prefactor variant is
    // reported alongside.
    let count: f64 = predict_local_min_count(n, cfg.k_hat, false)?;
    let with_prefactor: f64 = predict_local_min_count(n, cfg.k_hat, true)?;
    let years = count * SECONDS_PER_TRIAL / SECONDS_PER_YEAR;
    let gm_leading: f64 = predict_global_min(n, PredictionOrder::Leading)?;
    let gm_first: f64 = predict_global_min(n, PredictionOrder::FirstOrder)?;

    let header = headers(&[
        "experiment",
        "n",
        "k_hat",
        "local_min_count_predicted",
        "exhaustive_search_years",
        "gm_leading_predicted",
        "gm_first_order_predicted",
    ]);
    let rows = vec![vec![
        S("predict".into()),
        U(n as u64),
        F(cfg.k_hat),
        F(count),
        F(years),
        F(gm_leading),
        F(gm_first),
    ]];

    Ok(Artifacts {
        header,
        rows,
        summary: json!({
            "experiment": "predict",
            "n": n,
            "k_hat": cfg.k_hat,
            "local_min_count_predicted": count,
            "local_min_count_with_prefactor": with_prefactor,
            "seconds_per_trial": SECONDS_PER_TRIAL,
            "exhaustive_search_years": years,
            "gm_leading_predicted": gm_leading,
            "gm_first_order_predicted": gm_first,
        }),
        side: None,
    })
}
