//! Best-first search over partial instantiations in topological order.
//!
//! The queue is ordered by prefix probability. Completed worlds move their mass into
//! the target or non-target side; queued and pruned mass stays unknown, so the
//! upper bound is the target mass plus everything not yet ruled out.

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::abstraction::{epsilon_omp, Epsilon};
use crate::model::ProbNetwork;
use crate::predict::{self, OpCounter};

use super::{root_clamps, AnytimeBounds, Budget, InferError, MassLedger, Query, TracePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    None,
    /// Drop child values outside the abstraction's plausible sets.
    Preprune,
    /// Preprune, and also drop prefixes below ε or whose clamped Predict rules the
    /// target out.
    Lookahead,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Strategy::None),
            "preprune" => Ok(Strategy::Preprune),
            "lookahead" => Ok(Strategy::Lookahead),
            other => Err(format!("unknown strategy `{other}` (none, preprune, lookahead)")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::None => "none",
            Strategy::Preprune => "preprune",
            Strategy::Lookahead => "lookahead",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub eps: Epsilon,
    pub budget: Budget,
    pub strategy: Strategy,
}

impl SearchConfig {
    pub fn new(eps: Epsilon, strategy: Strategy) -> Self {
        SearchConfig {
            eps,
            budget: Budget::unlimited(),
            strategy,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub bounds: AnytimeBounds,
    pub trace: Vec<TracePoint>,
    /// Complete worlds reached.
    pub leaves: usize,
    /// Queue pops.
    pub expansions: usize,
    /// Nodes dropped by the strategy, and their prefix mass.
    pub pruned_nodes: usize,
    pub pruned_mass: f64,
    pub exhausted: bool,
    pub warnings: Vec<String>,
    pub ops: OpCounter,
}

struct Node {
    prob: f64,
    seq: u64,
    depth: usize,
    /// Indexed by variable; only the first `depth` variables in topological order are set.
    world: Vec<usize>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.prob.total_cmp(&other.prob).then_with(|| other.seq.cmp(&self.seq))
    }
}

pub fn poole_search(
    pnet: &ProbNetwork,
    q: &Query,
    config: &SearchConfig,
) -> Result<SearchOutcome, InferError> {
    let start = Instant::now();
    let s = pnet.structure();
    let order = s.topological_order();
    let n = s.len();
    let conditional = !q.evidence.is_empty();
    let mut ops = OpCounter::default();
    let mut warnings = Vec::new();

    let pruning = config.strategy != Strategy::None;
    let (abstraction, clamps, plsets) = if pruning {
        let abstraction = epsilon_omp(pnet, config.eps).network;
        let clamps = root_clamps(&abstraction, &q.evidence)?;
        let plsets = predict::sweep(&abstraction, &clamps, &mut ops).plsets;
        warnings.push(format!(
            "pruning assumes P(target) > {}; smaller targets may lose all their mass",
            config.eps.value()
        ));
        (Some(abstraction), clamps, Some(plsets))
    } else {
        (None, Vec::new(), None)
    };

    let mut ledger = MassLedger::default();
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Node {
        prob: 1.0,
        seq,
        depth: 0,
        world: vec![0; n],
    });
    let mut trace = vec![point(0, ledger.bounds(conditional, 0), start)];
    let (mut leaves, mut expansions, mut pruned_nodes, mut pruned_mass) = (0, 0, 0, 0.0);
    let mut exhausted = false;

    while let Some(node) = heap.pop() {
        if config.budget.exhausted(expansions, start.elapsed()) {
            heap.push(node);
            exhausted = true;
            break;
        }
        expansions += 1;
        let v = order[node.depth];
        let table = pnet.table(v);
        let row = table.row_index_in(&node.world);
        for value in 0..s.card(v) {
            let p = node.prob * table.get(row, value);
            if p == 0.0 {
                continue;
            }
            if let Some(plsets) = &plsets {
                if !plsets.get(v).contains(value) {
                    pruned_nodes += 1;
                    pruned_mass += p;
                    continue;
                }
            }
            let mut world = node.world.clone();
            world[v] = value;
            let depth = node.depth + 1;
            if depth == n {
                leaves += 1;
                if !q.evidence_holds(&world) {
                    ledger.off += p;
                } else if q.target_holds(&world) {
                    ledger.hit += p;
                } else {
                    ledger.miss += p;
                }
                continue;
            }
            if config.strategy == Strategy::Lookahead {
                let abstraction = abstraction.as_ref().expect("built for pruning strategies");
                let prefix: Vec<(usize, usize)> = order[..depth].iter().map(|&u| (u, world[u])).collect();
                let clamped = predict::merge_clamps(abstraction, &clamps, &prefix)?;
                let run = predict::sweep(abstraction, &clamped, &mut ops);
                let ruled_out = q.target.iter().any(|&(t, tv)| !run.plsets.get(t).contains(tv));
                if p < config.eps.value() || ruled_out {
                    pruned_nodes += 1;
                    pruned_mass += p;
                    continue;
                }
            }
            seq += 1;
            heap.push(Node {
                prob: p,
                seq,
                depth,
                world,
            });
        }
        trace.push(point(expansions, ledger.bounds(conditional, expansions), start));
    }

    Ok(SearchOutcome {
        bounds: ledger.bounds(conditional, expansions),
        trace,
        leaves,
        expansions,
        pruned_nodes,
        pruned_mass,
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::generate_chain;
    use crate::probinfer::exact_query;

    fn eps(v: f64) -> Epsilon {
        Epsilon::new(v).unwrap()
    }

    #[test]
    fn exhaustive_search_is_exact() {
        let net = generate_chain(4, eps(0.2)).unwrap();
        let q = Query::new(net.structure(), vec![(3, 1)], vec![(0, 0)]).unwrap();
        let out = poole_search(&net, &q, &SearchConfig::new(eps(0.2), Strategy::None)).unwrap();
        let exact = exact_query(&net, &q).unwrap();
        assert!((out.bounds.lower - exact).abs() < 1e-12);
        assert!((out.bounds.upper - exact).abs() < 1e-12);
        assert_eq!(out.leaves, 16);
    }

    #[test]
    fn preprune_visits_fewer_leaves() {
        let net = generate_chain(5, eps(0.1)).unwrap();
        let q = Query::new(net.structure(), vec![(4, 0)], vec![]).unwrap();
        let out = poole_search(&net, &q, &SearchConfig::new(eps(0.1), Strategy::Preprune)).unwrap();
        let exact = exact_query(&net, &q).unwrap();
        assert!(out.leaves < 32);
        assert!(out.bounds.contains(exact, 1e-12));
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn strategy_parse() {
        assert_eq!("lookahead".parse::<Strategy>().unwrap(), Strategy::Lookahead);
        assert!("greedy".parse::<Strategy>().is_err());
    }
}
