//! Stratified completion of plausible sets.
//!
//! Each stage isolates the loops that survive once blocked nodes are removed, adds the
//! roots of what remains to the blocking set, and re-runs Predict for every plausible
//! instantiation of the blocking set with those nodes clamped. The union over
//! instantiations is sound at every stage and never grows from one stage to the next;
//! when no loop survives, it is exact.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{ActionSet, Evidence, KappaNetwork, ModelError, NetworkStructure};
use crate::predict::{self, OpCounter, PlausibleSetMap, PredictError, Provenance};

/// Default cap on the instantiation space of the blocking set.
pub const DEFAULT_CS_CAP: u64 = 1 << 16;

#[derive(Debug, Error)]
pub enum ScompleteError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Predict(#[from] PredictError),
    #[error("blocking set needs {space} instantiations, cap is {cap}")]
    CapExceeded {
        space: u64,
        cap: u64,
        /// Last completed stage; still sound.
        partial: Box<PlausibleSetMap>,
    },
}

/// What remains of a structure after removing blocked nodes and stripping dangling ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedGraph {
    pub nodes: BTreeSet<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl ReducedGraph {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes with no incoming edge inside the reduced graph, ascending.
    pub fn roots(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .copied()
            .filter(|&v| !self.edges.iter().any(|&(_, to)| to == v))
            .collect()
    }
}

/// Remove the blocked nodes (with all their arcs), then repeatedly strip nodes with at
/// most one neighbor. An empty result means no undirected cycle avoids `blocked`.
pub fn isolate_loops(structure: &NetworkStructure, blocked: &BTreeSet<usize>) -> ReducedGraph {
    let n = structure.len();
    let alive: Vec<bool> = (0..n).map(|v| !blocked.contains(&v)).collect();
    let edges: Vec<(usize, usize)> = structure
        .edges()
        .iter()
        .copied()
        .filter(|&(a, b)| alive[a] && alive[b])
        .collect();
    strip_dangling(alive, edges)
}

/// Repeatedly drop live nodes with at most one incident edge.
pub(crate) fn strip_dangling(mut alive: Vec<bool>, mut edges: Vec<(usize, usize)>) -> ReducedGraph {
    let n = alive.len();
    let mut degree = vec![0usize; n];
    for &(a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| alive[v] && degree[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &(a, b) in &edges {
            let other = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if alive[other] {
                degree[other] -= 1;
                if degree[other] <= 1 {
                    stack.push(other);
                }
            }
        }
        edges.retain(|&(a, b)| a != v && b != v);
    }
    ReducedGraph {
        nodes: (0..n).filter(|&v| alive[v]).collect(),
        edges,
    }
}

/// Blocking bookkeeping for one stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockingState {
    pub stage: usize,
    /// Blocking variables, in the order they joined.
    pub cut_set: Vec<usize>,
    /// Believed or previously blocking variables removed before loop isolation.
    pub bset: BTreeSet<usize>,
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub state: BlockingState,
    /// Instantiations of the cut set that were swept.
    pub instances: usize,
    /// Instantiations skipped because a clamped value lacked rank-0 support.
    pub skipped: usize,
    pub plsets: PlausibleSetMap,
}

#[derive(Clone, Debug)]
pub struct ScompleteOutcome {
    /// Final, complete plausible sets.
    pub plsets: PlausibleSetMap,
    /// Plain Predict result the stages refine.
    pub initial: PlausibleSetMap,
    pub stages: Vec<Stage>,
    pub ops: OpCounter,
}

#[derive(Clone, Copy, Debug)]
pub struct ScompleteConfig {
    pub cs_cap: u64,
}

impl Default for ScompleteConfig {
    fn default() -> Self {
        ScompleteConfig {
            cs_cap: DEFAULT_CS_CAP,
        }
    }
}

pub fn scomplete(
    net: &KappaNetwork,
    evidence: &Evidence,
    actions: &ActionSet,
    config: ScompleteConfig,
) -> Result<ScompleteOutcome, ScompleteError> {
    let network = net.apply_actions(actions)?;
    let base = predict::evidence_clamps(&network, evidence)?;
    let s = network.structure();
    let mut ops = OpCounter::default();

    let initial = predict::sweep(&network, &base, &mut ops).plsets;
    let mut current = initial.clone();
    let mut bset: BTreeSet<usize> = current.believed().into_iter().map(|(v, _)| v).collect();
    let mut cut_set: Vec<usize> = Vec::new();
    let mut stages = Vec::new();

    loop {
        let reduced = isolate_loops(s, &bset);
        if reduced.is_empty() {
            break;
        }
        for r in reduced.roots() {
            if !cut_set.contains(&r) {
                cut_set.push(r);
            }
        }
        let space = s.space_size(cut_set.iter().copied());
        if space > config.cs_cap {
            return Err(ScompleteError::CapExceeded {
                space,
                cap: config.cs_cap,
                partial: Box::new(current),
            });
        }

        // Componentwise plausibility of each blocking value under the current stage.
        let choices: Vec<Vec<usize>> = cut_set.iter().map(|&c| current.get(c).iter().collect()).collect();
        let mut union: Option<PlausibleSetMap> = None;
        let (mut instances, mut skipped) = (0, 0);
        for_each_choice(&choices, |values| {
            let mut clamps = base.clone();
            for (&c, &value) in cut_set.iter().zip(values) {
                clamps[c] = Some(value);
            }
            let run = predict::sweep(&network, &clamps, &mut ops);
            if run.unsupported.iter().any(|v| cut_set.contains(v)) {
                skipped += 1;
                return;
            }
            instances += 1;
            match union.as_mut() {
                Some(acc) => acc.union_with(&run.plsets),
                None => union = Some(run.plsets),
            }
        });
        current = union.expect("an instantiation drawn from a zero-rank world always survives");
        stages.push(Stage {
            state: BlockingState {
                stage: stages.len() + 1,
                cut_set: cut_set.clone(),
                bset: bset.clone(),
            },
            instances,
            skipped,
            plsets: current.clone(),
        });
        bset.extend(current.believed().into_iter().map(|(v, _)| v));
        bset.extend(cut_set.iter().copied());
    }

    current.set_provenance(Provenance::CompleteCertified);
    Ok(ScompleteOutcome {
        plsets: current,
        initial,
        stages,
        ops,
    })
}

fn for_each_choice(choices: &[Vec<usize>], mut visit: impl FnMut(&[usize])) {
    if choices.iter().any(Vec::is_empty) {
        return;
    }
    let mut odometer = vec![0usize; choices.len()];
    let mut values: Vec<usize> = choices.iter().map(|c| c[0]).collect();
    loop {
        visit(&values);
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < choices[pos].len() {
                values[pos] = choices[pos][odometer[pos]];
                break;
            }
            odometer[pos] = 0;
            values[pos] = choices[pos][0];
        }
    }
}
