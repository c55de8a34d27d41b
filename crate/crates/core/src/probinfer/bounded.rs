//! Bounded cutset conditioning.
//!
//! Cutset values outside the ε-abstraction's plausible sets are dropped before any
//! instance is enumerated. Surviving instances are processed cheapest stratum first,
//! each contributing its exact joint masses; unprocessed and pruned instances stay in
//! the residual.

use std::time::Instant;

use serde::Serialize;

use crate::abstraction::{epsilon_omp, Epsilon};
use crate::model::{Kappa, KappaNetwork, ProbNetwork};
use crate::predict::{self, OpCounter, PlausibleSetMap};
use crate::scomplete::DEFAULT_CS_CAP;
use crate::worlds::{self, DEFAULT_WORLD_CAP};

use super::{
    find_cutset, loss_of_mass, root_clamps, AnytimeBounds, Budget, InferError, LossOfMass,
    MassLedger, Query, TracePoint,
};

#[derive(Clone, Debug)]
pub struct BoundedConfig {
    pub eps: Epsilon,
    pub budget: Budget,
    /// Use this cutset instead of the greedy one (must break every loop for the
    /// per-instance problems to be polytrees; correctness does not depend on it).
    pub cutset: Option<Vec<usize>>,
    pub world_cap: u64,
    pub instance_cap: u64,
}

impl BoundedConfig {
    pub fn new(eps: Epsilon) -> Self {
        BoundedConfig {
            eps,
            budget: Budget::unlimited(),
            cutset: None,
            world_cap: DEFAULT_WORLD_CAP,
            instance_cap: DEFAULT_CS_CAP,
        }
    }
}

/// A full instantiation of the cutset, in cutset order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutsetInstance {
    pub values: Vec<usize>,
    /// Estimated stratum: summed abstraction ranks of the cutset values.
    pub key: Kappa,
    /// `P(w)`, once processed.
    pub weight: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct BoundedOutcome {
    pub bounds: AnytimeBounds,
    pub loss: LossOfMass,
    pub trace: Vec<super::TracePoint>,
    pub cutset: Vec<usize>,
    /// Cutset (variable, value) pairs outside the abstraction's plausible sets.
    pub pruned_values: Vec<(usize, usize)>,
    /// Instances containing a pruned value; never enumerated.
    pub pruned_instances: u64,
    /// Surviving instances in processing order.
    pub instances: Vec<CutsetInstance>,
    /// `P'(x = v)` accumulated over processed instances (prior scale).
    pub marginals: Vec<Vec<f64>>,
    pub plsets: PlausibleSetMap,
    pub exhausted: bool,
    pub warnings: Vec<String>,
    pub ops: OpCounter,
}

pub fn bounded_conditioning(
    pnet: &ProbNetwork,
    q: &Query,
    config: &BoundedConfig,
) -> Result<BoundedOutcome, InferError> {
    let start = Instant::now();
    let s = pnet.structure();
    let abstraction = epsilon_omp(pnet, config.eps).network;
    let clamps = root_clamps(&abstraction, &q.evidence)?;
    let mut ops = OpCounter::default();
    let plsets = predict::sweep(&abstraction, &clamps, &mut ops).plsets;

    let mut cutset = config.cutset.clone().unwrap_or_else(|| find_cutset(s));
    cutset.sort_unstable();
    cutset.dedup();

    let pruned_values: Vec<(usize, usize)> = cutset
        .iter()
        .flat_map(|&c| {
            let set = plsets.get(c);
            (0..s.card(c)).filter(move |&v| !set.contains(v)).map(move |v| (c, v))
        })
        .collect();
    let total = s.space_size(cutset.iter().copied());
    let survivors = cutset.iter().map(|&c| plsets.get(c).len() as u64).product::<u64>();
    if survivors > config.instance_cap {
        return Err(InferError::TooManyInstances {
            instances: survivors,
            cap: config.instance_cap,
        });
    }

    let mut instances = Vec::with_capacity(survivors as usize);
    let choices: Vec<Vec<usize>> = cutset.iter().map(|&c| plsets.get(c).iter().collect()).collect();
    for_each_product(&choices, |values| {
        instances.push(CutsetInstance {
            values: values.to_vec(),
            key: stratum_key(&abstraction, &plsets, &cutset, values),
            weight: None,
        });
    });
    instances.sort_by(|a, b| a.key.cmp(&b.key).then_with(|| a.values.cmp(&b.values)));

    let conditional = !q.evidence.is_empty();
    let mut ledger = MassLedger::default();
    let mut marginals: Vec<Vec<f64>> = (0..s.len()).map(|v| vec![0.0; s.card(v)]).collect();
    let mut trace = vec![point(0, ledger.bounds(conditional, 0), start)];
    let mut exhausted = false;
    let mut fixed = vec![None; s.len()];
    for i in 0..instances.len() {
        if config.budget.exhausted(i, start.elapsed()) {
            exhausted = true;
            break;
        }
        for (&c, &value) in cutset.iter().zip(&instances[i].values) {
            fixed[c] = Some(value);
        }
        let (mut weight, mut hit, mut miss, mut off) = (0.0, 0.0, 0.0, 0.0);
        worlds::walk(pnet, &fixed, config.world_cap, |w, p| {
            weight += p;
            for (v, &value) in w.iter().enumerate() {
                marginals[v][value] += p;
            }
            if !q.evidence_holds(w) {
                off += p;
            } else if q.target_holds(w) {
                hit += p;
            } else {
                miss += p;
            }
        })?;
        instances[i].weight = Some(weight);
        ledger.hit += hit;
        ledger.miss += miss;
        ledger.off += off;
        trace.push(point(i + 1, ledger.bounds(conditional, i + 1), start));
    }

    let processed = trace.len() - 1;
    let bounds = ledger.bounds(conditional, processed);
    let loss = loss_of_mass(&marginals)?;
    let mut warnings = Vec::new();
    if !exhausted && !pruned_values.is_empty() && ledger.hit == 0.0 {
        warnings.push(format!(
            "no surviving instance supports the target; bounds degenerate to [0, {}]",
            bounds.upper
        ));
    }
    Ok(BoundedOutcome {
        bounds,
        loss,
        trace,
        cutset,
        pruned_values,
        pruned_instances: total - survivors,
        instances,
        marginals,
        plsets,
        exhausted,
        warnings,
        ops,
    })
}

fn point(step: usize, b: AnytimeBounds, start: Instant) -> TracePoint {
    TracePoint {
        step,
        lower: b.lower,
        upper: b.upper,
        elapsed: start.elapsed(),
    }
}

/// Sum over cutset nodes of the smallest local rank of the instance value, over parent
/// rows that agree with the instance on cutset parents and are plausible elsewhere.
fn stratum_key(
    abstraction: &KappaNetwork,
    plsets: &PlausibleSetMap,
    cutset: &[usize],
    values: &[usize],
) -> Kappa {
    let value_of = |v: usize| cutset.iter().position(|&c| c == v).map(|i| values[i]);
    cutset
        .iter()
        .zip(values)
        .map(|(&c, &value)| {
            let table = abstraction.table(c);
            (0..table.row_count())
                .filter(|&r| {
                    table.row_key(r).iter().zip(table.parents()).all(|(&pv, &p)| match value_of(p) {
                        Some(fixed) => fixed == pv,
                        None => plsets.get(p).contains(pv),
                    })
                })
                .map(|r| table.get(r, value))
                .min()
                .unwrap_or(Kappa::INFINITY)
        })
        .sum()
}

fn for_each_product(choices: &[Vec<usize>], mut visit: impl FnMut(&[usize])) {
    let mut values = Vec::with_capacity(choices.len());
    fn rec(choices: &[Vec<usize>], values: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        match choices.split_first() {
            None => visit(values),
            Some((head, rest)) => {
                for &v in head {
                    values.push(v);
                    rec(rest, values, visit);
                    values.pop();
                }
            }
        }
    }
    rec(choices, &mut values, &mut visit);
}
