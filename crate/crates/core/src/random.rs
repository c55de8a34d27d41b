//! Seeded random networks for test suites and experiments.
//!
//! Every generator draws from a caller-supplied RNG; `seeded` gives the ChaCha
//! stream used throughout so a single seed reproduces a whole suite.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::completeness::check_complete;
use crate::model::{
    ActionSet, Evidence, Kappa, KappaNetwork, Network, NetworkStructure, ProbNetwork, Table,
    Variable,
};

pub type SuiteRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for generated structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub min_vars: usize,
    pub max_vars: usize,
    pub max_values: usize,
    pub max_parents: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            min_vars: 2,
            max_vars: 10,
            max_values: 3,
            max_parents: 3,
        }
    }
}

fn variables(rng: &mut impl Rng, shape: &Shape, n: usize) -> Vec<Variable> {
    (0..n)
        .map(|i| {
            let card = rng.random_range(2..=shape.max_values.max(2));
            Variable::new(format!("v{i}"), (0..card).map(|k| format!("v{i}_{k}")))
                .expect("distinct generated labels")
        })
        .collect()
}

/// Random DAG: each variable draws up to `max_parents` parents among earlier ones.
/// With `cyclic`, redraws until some undirected cycle exists.
pub fn random_dag(rng: &mut impl Rng, shape: &Shape, cyclic: bool) -> NetworkStructure {
    let min = if cyclic { shape.min_vars.max(3) } else { shape.min_vars.max(1) };
    loop {
        let n = rng.random_range(min..=shape.max_vars.max(min));
        let mut edges = Vec::new();
        for child in 1..n {
            let k = rng.random_range(0..=shape.max_parents.min(child));
            for p in sample(rng, child, k).into_iter() {
                edges.push((p, child));
            }
        }
        let s = NetworkStructure::from_indices(variables(rng, shape, n), edges)
            .expect("edges point forward");
        if !cyclic || !check_complete(&s, &[]).is_complete() {
            return s;
        }
    }
}

/// Random polytree: a random forest (mostly one tree) with random arc orientation.
pub fn random_polytree(rng: &mut impl Rng, shape: &Shape) -> NetworkStructure {
    let n = rng.random_range(shape.min_vars.max(1)..=shape.max_vars.max(1));
    let mut indegree = vec![0usize; n];
    let mut edges = Vec::new();
    for j in 1..n {
        if rng.random_bool(0.1) {
            continue;
        }
        let i = rng.random_range(0..j);
        let (from, to) = if rng.random_bool(0.5) && indegree[j] < shape.max_parents {
            (i, j)
        } else if indegree[i] < shape.max_parents {
            (j, i)
        } else {
            (i, j)
        };
        indegree[to] += 1;
        edges.push((from, to));
    }
    NetworkStructure::from_indices(variables(rng, shape, n), edges).expect("a tree has no cycles")
}

/// Normalized kappa tables. With `definite`, every row has exactly one rank-0 value.
pub fn random_kappa_tables(
    rng: &mut impl Rng,
    structure: &NetworkStructure,
    definite: bool,
) -> KappaNetwork {
    let tables = (0..structure.len())
        .map(|v| {
            let card = structure.card(v);
            let parents = structure.parents(v).to_vec();
            let parent_cards: Vec<usize> = parents.iter().map(|&p| structure.card(p)).collect();
            let rows: usize = parent_cards.iter().product();
            let mut entries = Vec::with_capacity(rows * card);
            for _ in 0..rows {
                let zero = rng.random_range(0..card);
                for value in 0..card {
                    let k = if value == zero {
                        Kappa::ZERO
                    } else if rng.random_bool(0.1) {
                        Kappa::INFINITY
                    } else if definite {
                        Kappa::finite(rng.random_range(1..=3))
                    } else {
                        Kappa::finite(rng.random_range(0..=3))
                    };
                    entries.push(k);
                }
            }
            Table::new(v, card, parents, parent_cards, entries)
        })
        .collect();
    Network::new(structure.clone(), tables).expect("generated rows are normalized")
}

/// Probability tables mixing near-deterministic and moderate rows, with occasional zeros.
pub fn random_prob_tables(rng: &mut impl Rng, structure: &NetworkStructure) -> ProbNetwork {
    let tables = (0..structure.len())
        .map(|v| {
            let card = structure.card(v);
            let parents = structure.parents(v).to_vec();
            let parent_cards: Vec<usize> = parents.iter().map(|&p| structure.card(p)).collect();
            let rows: usize = parent_cards.iter().product();
            let mut entries = Vec::with_capacity(rows * card);
            for _ in 0..rows {
                let mut row: Vec<f64> = if rng.random_bool(0.5) {
                    let major = rng.random_range(0..card);
                    (0..card)
                        .map(|k| {
                            if k == major {
                                1.0
                            } else if rng.random_bool(0.05) {
                                0.0
                            } else {
                                rng.random_range(0.001..0.25)
                            }
                        })
                        .collect()
                } else {
                    (0..card).map(|_| rng.random_range(0.05..1.0)).collect()
                };
                let sum: f64 = row.iter().sum();
                for p in &mut row {
                    *p /= sum;
                }
                entries.extend(row);
            }
            Table::new(v, card, parents, parent_cards, entries)
        })
        .collect();
    Network::new(structure.clone(), tables).expect("generated rows sum to one")
}

/// Up to two roots observed at values of finite rank.
pub fn random_root_evidence(rng: &mut impl Rng, net: &KappaNetwork) -> Evidence {
    let s = net.structure();
    let roots: Vec<usize> = (0..s.len()).filter(|&v| s.is_root(v)).collect();
    let k = rng.random_range(0..=roots.len().min(2));
    let mut evidence = Evidence::new();
    for i in sample(rng, roots.len(), k).into_iter() {
        let v = roots[i];
        let finite: Vec<usize> = (0..s.card(v)).filter(|&x| net.table(v).get(0, x).is_finite()).collect();
        let value = finite[rng.random_range(0..finite.len())];
        evidence = evidence.with(s.name(v), s.variable(v).values()[value].clone());
    }
    evidence
}

/// Up to two variables forced to random values.
pub fn random_actions(rng: &mut impl Rng, structure: &NetworkStructure) -> ActionSet {
    let k = rng.random_range(0..=structure.len().min(2));
    let mut actions = ActionSet::new();
    for v in sample(rng, structure.len(), k).into_iter() {
        let value = rng.random_range(0..structure.card(v));
        actions = actions.with(structure.name(v), structure.variable(v).values()[value].clone());
    }
    actions
}
