//! Probabilistic inference: an exact enumeration baseline and two anytime algorithms
//! (bounded cutset conditioning and best-first world search) that use plausible sets
//! of the ε-abstraction to decide what can be skipped.
//!
//! Both anytime algorithms keep every unexplored or pruned world inside the upper
//! bound, so the bracket `[lower, upper]` holds at every step whatever was pruned;
//! pruning only shows up as mass that is never accounted for.

mod bounded;
mod cutset;
mod exact;
mod search;

pub use bounded::{bounded_conditioning, BoundedConfig, BoundedOutcome, CutsetInstance};
pub use cutset::find_cutset;
pub use exact::{exact_marginals, exact_query, exact_query_with_cap};
pub use search::{poole_search, SearchConfig, SearchOutcome, Strategy};

use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::model::{Evidence, KappaNetwork, ModelError, NetworkStructure};
use crate::predict::PredictError;
use crate::worlds::WorldCapExceeded;

/// Tolerance on per-variable mass sums above one.
pub const MASS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum InferError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Predict(#[from] PredictError),
    #[error(transparent)]
    Cap(#[from] WorldCapExceeded),
    #[error("malformed query `{0}`: expected var=val[,var=val]")]
    MalformedQuery(String),
    #[error("query target must be non-empty")]
    EmptyTarget,
    #[error("variable `{0}` appears in both target and evidence")]
    TargetOverlapsEvidence(String),
    #[error("variable `{0}` appears twice in the query target")]
    RepeatedTarget(String),
    #[error("evidence has probability zero")]
    ZeroEvidence,
    #[error("variable `{variable}` has mass {sum} > 1")]
    MassExceedsOne { variable: usize, sum: f64 },
    #[error("cutset has {instances} instances, cap is {cap}")]
    TooManyInstances { instances: u64, cap: u64 },
}

/// `P(target | evidence)` for conjunctions of (variable, value) literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub target: Vec<(usize, usize)>,
    pub evidence: Vec<(usize, usize)>,
}

impl Query {
    pub fn new(
        structure: &NetworkStructure,
        target: Vec<(usize, usize)>,
        evidence: Vec<(usize, usize)>,
    ) -> Result<Self, InferError> {
        if target.is_empty() {
            return Err(InferError::EmptyTarget);
        }
        for (i, &(v, value)) in target.iter().enumerate() {
            assert!(value < structure.card(v), "target value out of range");
            if target[..i].iter().any(|&(u, _)| u == v) {
                return Err(InferError::RepeatedTarget(structure.name(v).to_string()));
            }
            if evidence.iter().any(|&(u, _)| u == v) {
                return Err(InferError::TargetOverlapsEvidence(structure.name(v).to_string()));
            }
        }
        Ok(Query { target, evidence })
    }

    /// Parse `"var=val[,var=val]"` against a structure.
    pub fn parse(
        structure: &NetworkStructure,
        target: &str,
        evidence: &Evidence,
    ) -> Result<Self, InferError> {
        let mut literals = Vec::new();
        for part in target.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, label) = part
                .split_once('=')
                .ok_or_else(|| InferError::MalformedQuery(target.to_string()))?;
            let (name, label) = (name.trim(), label.trim());
            let v = structure.index_of(name).ok_or_else(|| ModelError::UnknownVariable {
                name: name.to_string(),
                location: "query".into(),
            })?;
            let value = structure.variable(v).value_index(label).ok_or_else(|| {
                ModelError::UnknownValue {
                    variable: name.to_string(),
                    value: label.to_string(),
                    location: "query".into(),
                }
            })?;
            literals.push((v, value));
        }
        let evidence = evidence.resolve(structure, "evidence")?;
        Query::new(structure, literals, evidence)
    }

    pub fn target_holds(&self, world: &[usize]) -> bool {
        self.target.iter().all(|&(v, value)| world[v] == value)
    }

    pub fn evidence_holds(&self, world: &[usize]) -> bool {
        self.evidence.iter().all(|&(v, value)| world[v] == value)
    }
}

/// Clamps for the root part of the evidence, used to steer pruning.
///
/// Non-root evidence does not prune anything; it only enters the bounds.
pub(crate) fn root_clamps(
    abstraction: &KappaNetwork,
    evidence: &[(usize, usize)],
) -> Result<Vec<Option<usize>>, InferError> {
    let s = abstraction.structure();
    let mut clamps = vec![None; s.len()];
    for &(v, value) in evidence {
        if s.is_root(v) {
            if abstraction.table(v).get(0, value).is_infinite() {
                return Err(InferError::ZeroEvidence);
            }
            clamps[v] = Some(value);
        }
    }
    Ok(clamps)
}

/// Lower/upper envelope on a query probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnytimeBounds {
    pub lower: f64,
    pub upper: f64,
    /// Subproblems (instances or expansions) processed so far.
    pub processed: usize,
    /// Prior mass not yet accounted for: unprocessed plus pruned.
    pub residual: f64,
}

impl AnytimeBounds {
    pub fn vacuous() -> Self {
        AnytimeBounds {
            lower: 0.0,
            upper: 1.0,
            processed: 0,
            residual: 1.0,
        }
    }

    /// Never negative; the two sides can cross by an ulp once they meet.
    pub fn width(&self) -> f64 {
        (self.upper - self.lower).max(0.0)
    }

    pub fn contains(&self, p: f64, tolerance: f64) -> bool {
        self.lower <= p + tolerance && p <= self.upper + tolerance
    }
}

/// Accumulated masses for a conditional query, turned into a bracket.
///
/// `hit` is the accounted mass of target ∧ evidence, `miss` of ¬target ∧ evidence,
/// `off` of ¬evidence. Everything else (`1 - hit - miss - off`) is unknown.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct MassLedger {
    pub hit: f64,
    pub miss: f64,
    pub off: f64,
}

impl MassLedger {
    pub fn accounted(&self) -> f64 {
        self.hit + self.miss + self.off
    }

    pub fn bounds(&self, conditional: bool, processed: usize) -> AnytimeBounds {
        let residual = (1.0 - self.accounted()).max(0.0);
        let (lower, upper) = if conditional {
            let lo_den = self.hit + self.miss + residual;
            let hi_den = self.hit + residual + self.miss;
            let lower = if lo_den > 0.0 { self.hit / lo_den } else { 0.0 };
            let upper = if hi_den > 0.0 { (self.hit + residual) / hi_den } else { 1.0 };
            (lower, upper.min(1.0))
        } else {
            // Each side is a single monotone sum, so the bracket tightens exactly. No
            // clamp against each other: that would let rounding push `upper` back up.
            (self.hit, 1.0 - self.miss)
        };
        AnytimeBounds {
            lower,
            upper,
            processed,
            residual,
        }
    }
}

/// Limit on anytime work; `None` fields are unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_steps: Option<usize>,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn steps(n: usize) -> Self {
        Budget {
            max_steps: Some(n),
            time_limit: None,
        }
    }

    pub(crate) fn exhausted(&self, steps: usize, elapsed: Duration) -> bool {
        self.max_steps.is_some_and(|m| steps >= m) || self.time_limit.is_some_and(|t| elapsed >= t)
    }
}

/// One anytime step, for plotting convergence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TracePoint {
    pub step: usize,
    pub lower: f64,
    pub upper: f64,
    pub elapsed: Duration,
}

/// Write a trace as `step,lower,upper,elapsed` CSV (seconds, LF line endings).
pub fn write_trace_csv<W: std::io::Write>(
    trace: &[TracePoint],
    out: W,
    with_timing: bool,
) -> Result<(), csv::Error> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(["step", "lower", "upper", "elapsed"])?;
    for point in trace {
        let elapsed = if with_timing { point.elapsed.as_secs_f64() } else { 0.0 };
        writer.write_record([
            point.step.to_string(),
            point.lower.to_string(),
            point.upper.to_string(),
            elapsed.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Probability mass unaccounted for per variable after pruning.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LossOfMass {
    pub per_variable: Vec<f64>,
    pub average: f64,
}

/// `1 - Σ_v P'(x = v)` for each variable's partial distribution, and their mean.
pub fn loss_of_mass(approx: &[Vec<f64>]) -> Result<LossOfMass, InferError> {
    let mut per_variable = Vec::with_capacity(approx.len());
    for (variable, masses) in approx.iter().enumerate() {
        let sum: f64 = masses.iter().sum();
        if sum > 1.0 + MASS_TOLERANCE {
            return Err(InferError::MassExceedsOne { variable, sum });
        }
        per_variable.push((1.0 - sum).max(0.0));
    }
    let average = if per_variable.is_empty() {
        0.0
    } else {
        per_variable.iter().sum::<f64>() / per_variable.len() as f64
    };
    Ok(LossOfMass {
        per_variable,
        average,
    })
}
