//! Biased-crossover global search on random K-degree pseudo-Boolean
//! cost landscapes.
//!
//! The crate covers the full pipeline: landscape generation and evaluation
//! ([`cost`]), single-flip gradient descent and exhaustive/Monte-Carlo
//! landscape surveys ([`search`]), closed-form predictions for minima
//! statistics and crossover tuning ([`theory`]), weighted-crossover offspring
//! sampling and the selection/descent pipelines ([`crossover`]), and a
//! travelling-salesman demonstrator ([`tsp`]).
//!
//! Everything is generic over the floating-point [`Scalar`]; the `*64`
//! aliases below pin the common f64 instantiation.

pub mod combin;
pub mod cost;
pub mod crossover;
pub mod error;
pub mod scalar;
pub mod search;
pub mod seeding;
pub mod theory;
pub mod tsp;

pub use cost::{uniform_states, BitState, CostMoments, IsotropyReport, MeanState, PolyCost};
pub use crossover::{
    biased_pair_weights, crossover_forecast, objective_of_f, offspring_mean, pair_plan,
    run_combined, run_selection_crossover, sample_offspring, CrossoverForecast, CrossoverPlan,
    PoolRule, RunSummary, WeightDist,
};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use seeding::derive_seed;
pub use tsp::{
    fit_normalizer, generate_instance, read_instance, route_crossover, run_tsp_pipeline,
    tour_length, two_opt_descend, write_instance, CostNormalizer, Tour, TspInstance,
    TspRunResult,
};
pub use theory::{
    boltzmann_weights, effective_degree, large_n_crossover_norm, offspring_minimum_bound,
    optimal_gamma, predict_global_min, predict_local_min_count, predict_min_of_m,
    predict_min_of_m_ln, sample_gaussian_minima, DegreeMethod, EffectiveDegree,
    MinOfMPrediction, PredictionOrder,
};
pub use search::{
    descend, exhaustive_global_min, exhaustive_global_min_with_cap, exhaustive_local_min_count,
    exhaustive_local_min_count_with_cap, is_local_minimum, mc_local_min_estimate, proxy_cost,
    restart_search, restart_search_results, Descender, DescentResult, LocalMinEstimate,
};

/// f64 landscape.
pub type PolyCost64 = cost::PolyCost<f64>;
/// f32 landscape.
pub type PolyCost32 = cost::PolyCost<f32>;
/// f64 mean state.
pub type MeanState64 = cost::MeanState<f64>;
/// f64 moments report.
pub type CostMoments64 = cost::CostMoments<f64>;
/// f64 descent outcome.
pub type DescentResult64 = search::DescentResult<f64>;
/// f64 Monte Carlo local-minimum estimate.
pub type LocalMinEstimate64 = search::LocalMinEstimate<f64>;
