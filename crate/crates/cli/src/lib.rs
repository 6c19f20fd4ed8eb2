//! Experiment harness behind the `crossquad` binary: configuration
//! resolution, CSV/JSON emission, and the experiment implementations.

pub mod config;
pub mod csvio;
pub mod errors;
pub mod experiments;
