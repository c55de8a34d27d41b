//! ε sweep over a suite of probability networks, reporting lost mass per run.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abstraction::{generate_and, generate_chain, AbstractionError, Epsilon};
use crate::model::{parse_prob_network, Evidence, ModelError, ProbNetwork};
use crate::probinfer::{bounded_conditioning, BoundedConfig, Budget, InferError, Query};
use crate::random::{random_dag, random_polytree, random_prob_tables, seeded, Shape};
use crate::worlds::DEFAULT_WORLD_CAP;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Abstraction(#[from] AbstractionError),
    #[error("network `{network}`: {source}")]
    Infer {
        network: String,
        source: InferError,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub networks: Vec<NetworkSource>,
    pub eps: Vec<f64>,
    /// Instances per run; absent means unlimited.
    #[serde(default)]
    pub budget: Option<usize>,
    /// Query target such as `"x3=x3"`; defaults to the first value of the last
    /// variable in topological order.
    #[serde(default)]
    pub query: Option<String>,
    #[serde(default)]
    pub world_cap: Option<u64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum NetworkSource {
    /// A probability network document, relative to the config file.
    File(PathBuf),
    Chain { n: usize, eps: f64 },
    And { n: usize, eps: f64 },
    Random {
        count: usize,
        #[serde(default)]
        cyclic: bool,
        #[serde(default = "default_max_vars")]
        max_vars: usize,
    },
}

fn default_max_vars() -> usize {
    8
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub network: String,
    pub eps: f64,
    pub lm: f64,
    pub instances: usize,
    pub width: f64,
    /// Seconds; 0 unless timing was requested.
    pub elapsed: f64,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        for &e in &config.eps {
            Epsilon::new(e)?;
        }
        Ok(config)
    }
}

/// Resolve the network list, drawing random members from one stream seeded by `seed`.
pub fn load_networks(
    config: &ExperimentConfig,
    base_dir: &Path,
    seed: u64,
) -> Result<Vec<(String, ProbNetwork)>, ExperimentError> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    for (i, source) in config.networks.iter().enumerate() {
        match source {
            NetworkSource::File(path) => {
                let full = base_dir.join(path);
                let text = std::fs::read_to_string(&full)
                    .map_err(|source| ExperimentError::Io { path: full.clone(), source })?;
                out.push((path.display().to_string(), parse_prob_network(&text)?));
            }
            NetworkSource::Chain { n, eps } => {
                out.push((format!("chain-{n}"), generate_chain(*n, Epsilon::new(*eps)?)?));
            }
            NetworkSource::And { n, eps } => {
                out.push((format!("and-{n}"), generate_and(*n, Epsilon::new(*eps)?)?));
            }
            NetworkSource::Random {
                count,
                cyclic,
                max_vars,
            } => {
                if *max_vars < 3 && *cyclic {
                    return Err(ExperimentError::Config("cyclic networks need max_vars >= 3".into()));
                }
                let shape = Shape {
                    max_vars: *max_vars,
                    ..Shape::default()
                };
                for k in 0..*count {
                    let structure = if *cyclic {
                        random_dag(&mut rng, &shape, true)
                    } else {
                        random_polytree(&mut rng, &shape)
                    };
                    out.push((format!("random-{i}-{k}"), random_prob_tables(&mut rng, &structure)));
                }
            }
        }
    }
    Ok(out)
}

/// One bounded-conditioning run per (network, ε).
pub fn run_experiment(
    config: &ExperimentConfig,
    networks: &[(String, ProbNetwork)],
    timing: bool,
) -> Result<Vec<ExperimentRow>, ExperimentError> {
    let mut rows = Vec::new();
    for (name, net) in networks {
        let s = net.structure();
        let infer = |source| ExperimentError::Infer {
            network: name.clone(),
            source,
        };
        let query = match &config.query {
            Some(target) => Query::parse(s, target, &Evidence::new()).map_err(infer)?,
            None => {
                let last = *s.topological_order().last().ok_or_else(|| {
                    ExperimentError::Config(format!("network `{name}` is empty"))
                })?;
                Query::new(s, vec![(last, 0)], vec![]).map_err(infer)?
            }
        };
        for &e in &config.eps {
            let start = Instant::now();
            let mut bc = BoundedConfig::new(Epsilon::new(e)?);
            bc.budget = Budget {
                max_steps: config.budget,
                time_limit: None,
            };
            bc.world_cap = config.world_cap.unwrap_or(DEFAULT_WORLD_CAP);
            let out = bounded_conditioning(net, &query, &bc).map_err(infer)?;
            rows.push(ExperimentRow {
                network: name.clone(),
                eps: e,
                lm: out.loss.average,
                instances: out.bounds.processed,
                width: out.bounds.width(),
                elapsed: if timing { start.elapsed().as_secs_f64() } else { 0.0 },
            });
        }
    }
    Ok(rows)
}

/// CSV with a header row and LF line endings.
pub fn write_rows<W: std::io::Write>(rows: &[ExperimentRow], out: W) -> Result<(), ExperimentError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_writer(out);
    writer.write_record(["network", "eps", "lm", "instances", "width", "elapsed"])?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}
