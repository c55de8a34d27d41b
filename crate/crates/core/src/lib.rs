//! Plausibility inference over causal networks whose tables hold integer ranks
//! (kappa values), plus the probabilistic algorithms they are used to speed up.
//!
//! - [`model`]: variables, structures, kappa and probability tables, JSON documents.
//! - [`oracle`]: exact ranks by enumeration, the reference for everything else.
//! - [`predict`]: one-sweep plausible sets, sound on any network.
//! - [`completeness`]: structural certificates that a sweep was exact.
//! - [`scomplete`]: staged clamping that makes plausible sets exact on loops.
//! - [`abstraction`]: stratifying probability tables at a real ε.
//! - [`probinfer`]: exact, bounded-conditioning and best-first probability bounds.
//!
//! ```
//! use kappanet::model::{parse_kappa_network, ActionSet, Evidence};
//! use kappanet::predict::predict;
//!
//! let net = parse_kappa_network(r#"{
//!   "kind": "kappa",
//!   "variables": [{"name": "a", "values": ["a", "not_a"]},
//!                 {"name": "b", "values": ["b", "not_b"]}],
//!   "edges": [["a", "b"]],
//!   "tables": [
//!     {"child": "a", "rows": [{"given": [], "values": {"a": 0, "not_a": 1}}]},
//!     {"child": "b", "parents": ["a"], "dense": [[0, 2], [1, 0]]}
//!   ]
//! }"#).unwrap();
//! let run = predict(&net, &Evidence::new(), &ActionSet::new()).unwrap();
//! assert_eq!(run.plsets.believed(), vec![(0, 0), (1, 0)]);
//! ```

pub mod abstraction;
pub mod cli;
pub mod completeness;
pub mod experiment;
pub mod model;
pub mod oracle;
pub mod predict;
pub mod probinfer;
pub mod random;
pub mod scomplete;
pub mod worlds;

use thiserror::Error;

/// Any failure surfaced by the command-line front end, classified by exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error("cannot access `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid {what}: {source}")]
    Json {
        what: String,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Model(#[from] model::ModelError),
    #[error(transparent)]
    Predict(#[from] predict::PredictError),
    #[error(transparent)]
    Scomplete(#[from] scomplete::ScompleteError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error(transparent)]
    Abstraction(#[from] abstraction::AbstractionError),
    #[error(transparent)]
    Infer(#[from] probinfer::InferError),
    #[error(transparent)]
    Experiment(#[from] experiment::ExperimentError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// 1 for usage errors, 3 when a size cap stopped the run, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        use probinfer::InferError as I;
        let infer_cap = |e: &I| matches!(e, I::Cap(_) | I::TooManyInstances { .. });
        match self {
            Error::Usage(_) => 1,
            Error::Scomplete(scomplete::ScompleteError::CapExceeded { .. })
            | Error::Oracle(oracle::OracleError::Cap(_)) => 3,
            Error::Infer(e) if infer_cap(e) => 3,
            Error::Experiment(experiment::ExperimentError::Infer { source, .. }) if infer_cap(source) => 3,
            _ => 2,
        }
    }
}
