//! Experiment configuration: per-experiment defaults, optional JSON config
//! file, and command-line flags, merged in that order (flags win).

use crate::errors::CliError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "CROSSQUAD_OUT_DIR";

/// The experiment catalog, named after the outputs they reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig1c,
    Fig2b,
    Fig3,
    Fig3e,
    Fig4,
    Lemma2,
    Predict,
    TspSolve,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig1c => "fig1c",
            Experiment::Fig2b => "fig2b",
            Experiment::Fig3 => "fig3",
            Experiment::Fig3e => "fig3e",
            Experiment::Fig4 => "fig4",
            Experiment::Lemma2 => "lemma2",
            Experiment::Predict => "predict",
            Experiment::TspSolve => "tsp-solve",
        }
    }
}

/// Crossover bias: solved per realization ("auto") or fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaChoice {
    Auto,
    Value(f64),
}

impl FromStr for GammaChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            Ok(GammaChoice::Auto)
        } else {
            s.parse::<f64>()
                .map(GammaChoice::Value)
                .map_err(|e| format!("gamma must be \"auto\" or a number: {e}"))
        }
    }
}

impl Serialize for GammaChoice {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            GammaChoice::Auto => ser.serialize_str("auto"),
            GammaChoice::Value(v) => ser.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for GammaChoice {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(de)? {
            Repr::Num(v) => Ok(GammaChoice::Value(v)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Optional values accepted from a JSON config file; any present field
/// overrides the experiment default, and command-line flags override both.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<Vec<usize>>,
    pub k: Option<Vec<usize>>,
    pub m: Option<u64>,
    pub gamma: Option<GammaChoice>,
    pub replicas: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub exhaustive_cap: Option<usize>,
    pub full_scale: Option<bool>,
    pub cities: Option<usize>,
    pub pool_size: Option<usize>,
    pub instance: Option<PathBuf>,
    pub k_hat: Option<f64>,
}

/// Flag values as parsed from the command line (all optional).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n: Option<Vec<usize>>,
    pub k: Option<Vec<usize>>,
    pub m: Option<u64>,
    pub gamma: Option<GammaChoice>,
    pub replicas: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub exhaustive_cap: Option<usize>,
    pub full_scale: bool,
    pub cities: Option<usize>,
    pub pool_size: Option<usize>,
    pub instance: Option<PathBuf>,
    pub k_hat: Option<f64>,
}

/// A fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub experiment: &'static str,
    pub n: Vec<usize>,
    pub k: Vec<usize>,
    pub m: u64,
    pub gamma: Option<GammaChoice>,
    pub replicas: u64,
    pub seed: u64,
    pub out: PathBuf,
    #[serde(skip)]
    pub threads: Option<usize>,
    pub exhaustive_cap: usize,
    pub full_scale: bool,
    pub cities: usize,
    pub pool_size: usize,
    pub instance: Option<PathBuf>,
    pub k_hat: f64,
}

fn default_out(experiment: Experiment) -> PathBuf {
    let dir = std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    dir.join(format!("{}.csv", experiment.name()))
}

/// Per-experiment desk-scale defaults.
fn defaults(experiment: Experiment) -> Resolved {
    let base = Resolved {
        experiment: experiment.name(),
        n: vec![64],
        k: vec![4],
        m: 5000,
        gamma: None,
        replicas: 10,
        seed: 1,
        out: default_out(experiment),
        threads: None,
        exhaustive_cap: 24,
        full_scale: false,
        cities: 200,
        pool_size: 10,
        instance: None,
        k_hat: 1.14,
    };
    match experiment {
        Experiment::Fig1c => Resolved {
            n: vec![10, 12, 14, 16, 18, 20],
            k: vec![3, 4],
            replicas: 20,
            ..base
        },
        Experiment::Fig2b => Resolved {
            n: vec![12, 14, 16, 18, 20],
            k: vec![3],
            replicas: 20,
            ..base
        },
        Experiment::Fig3 => Resolved { replicas: 3, ..base },
        Experiment::Fig3e => Resolved { m: 100, ..base },
        Experiment::Fig4 => Resolved {
            m: 200,
            gamma: Some(GammaChoice::Value(0.05)),
            replicas: 20,
            ..base
        },
        Experiment::Lemma2 => Resolved {
            m: 10_000,
            replicas: 2000,
            ..base
        },
        Experiment::Predict => Resolved {
            n: vec![1000],
            replicas: 1,
            ..base
        },
        Experiment::TspSolve => Resolved {
            m: 200,
            gamma: Some(GammaChoice::Value(0.05)),
            replicas: 1,
            ..base
        },
    }
}

/// Applies full-run sizes where they differ from the desk defaults.
/// Only fields still at their default are touched, so explicit flags win.
fn apply_full_scale(cfg: &mut Resolved, experiment: Experiment, touched: &Touched) {
    match experiment {
        Experiment::Fig3 | Experiment::Fig3e => {
            if !touched.n {
                cfg.n = vec![200];
            }
            if !touched.m && experiment == Experiment::Fig3 {
                cfg.m = 20_000;
            }
            eprintln!(
                "note: full-scale run holds all degree-{} coefficient tables for N = {:?} \
                 in memory (hundreds of MB) and takes far longer than the desk-scale default",
                cfg.k.last().copied().unwrap_or(4),
                cfg.n
            );
        }
        Experiment::Fig4 | Experiment::TspSolve => {
            if !touched.cities {
                cfg.cities = 500;
            }
            if !touched.m {
                cfg.m = 500;
            }
        }
        _ => {}
    }
}

/// Which fields were set explicitly by file or flags.
#[derive(Default)]
struct Touched {
    n: bool,
    m: bool,
    cities: bool,
}

/// Resolves the final configuration: defaults, then the JSON config file
/// (if any), then command-line flags.
pub fn resolve(experiment: Experiment, config_path: Option<&Path>, flags: &Overrides) -> Result<Resolved, CliError> {
    let mut cfg = defaults(experiment);
    let mut touched = Touched::default();

    if let Some(path) = config_path {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
        let file: FileConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("parsing {}: {e}", path.display())))?;
        merge(&mut cfg, &mut touched, file);
    }

    let file_like = FileConfig {
        n: flags.n.clone(),
        k: flags.k.clone(),
        m: flags.m,
        gamma: flags.gamma,
        replicas: flags.replicas,
        seed: flags.seed,
        out: flags.out.clone(),
        threads: flags.threads,
        exhaustive_cap: flags.exhaustive_cap,
        full_scale: flags.full_scale.then_some(true),
        cities: flags.cities,
        pool_size: flags.pool_size,
        instance: flags.instance.clone(),
        k_hat: flags.k_hat,
    };
    merge(&mut cfg, &mut touched, file_like);

    if cfg.full_scale {
        apply_full_scale(&mut cfg, experiment, &touched);
    }
    validate(&cfg)?;
    Ok(cfg)
}

fn merge(cfg: &mut Resolved, touched: &mut Touched, src: FileConfig) {
    if let Some(v) = src.n {
        cfg.n = v;
        touched.n = true;
    }
    if let Some(v) = src.k {
        cfg.k = v;
    }
    if let Some(v) = src.m {
        cfg.m = v;
        touched.m = true;
    }
    if let Some(v) = src.gamma {
        cfg.gamma = Some(v);
    }
    if let Some(v) = src.replicas {
        cfg.replicas = v;
    }
    if let Some(v) = src.seed {
        cfg.seed = v;
    }
    if let Some(v) = src.out {
        cfg.out = v;
    }
    if let Some(v) = src.threads {
        cfg.threads = Some(v);
    }
    if let Some(v) = src.exhaustive_cap {
        cfg.exhaustive_cap = v;
    }
    if let Some(v) = src.full_scale {
        cfg.full_scale = v;
    }
    if let Some(v) = src.cities {
        cfg.cities = v;
        touched.cities = true;
    }
    if let Some(v) = src.pool_size {
        cfg.pool_size = v;
    }
    if let Some(v) = src.instance {
        cfg.instance = Some(v);
    }
    if let Some(v) = src.k_hat {
        cfg.k_hat = v;
    }
}

fn validate(cfg: &Resolved) -> Result<(), CliError> {
    if cfg.replicas < 1 {
        return Err(CliError::Config("replicas must be at least 1".into()));
    }
    if cfg.n.is_empty() || cfg.k.is_empty() {
        return Err(CliError::Config("need at least one value for --n and --k".into()));
    }
    if let Some(GammaChoice::Value(g)) = cfg.gamma {
        if !(0.0..=0.5).contains(&g) {
            return Err(CliError::Config(format!(
                "gamma = {g} out of range: need 0 <= gamma <= 0.5 or \"auto\""
            )));
        }
    }
    Ok(())
}
