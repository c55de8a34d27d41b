//! Shared fixtures and brute-force helpers for the integration tests.
#![allow(dead_code)]

use kappanet::model::{
    parse_kappa_network, Evidence, KappaNetwork, NetworkStructure, ProbNetwork,
};
use kappanet::oracle::KappaOracle;
use kappanet::predict::ValueSet;

pub fn n1() -> KappaNetwork {
    parse_kappa_network(include_str!("../../docs/networks/n1.json")).unwrap()
}

pub fn d1() -> KappaNetwork {
    parse_kappa_network(include_str!("../../docs/networks/d1.json")).unwrap()
}

pub fn d1_believed_root() -> KappaNetwork {
    parse_kappa_network(include_str!("../../docs/networks/d1_believed_root.json")).unwrap()
}

/// Exact plausible sets of `net` after action surgery, conditioned on root evidence.
pub fn exact_sets(net: &KappaNetwork, evidence: &Evidence, actions: &Evidence) -> Vec<ValueSet> {
    let surgered = net.apply_actions(actions).unwrap();
    let given = evidence.resolve(surgered.structure(), "evidence").unwrap();
    KappaOracle::new(&surgered).exact_plausible_sets(&given).unwrap()
}

/// Visit every full world of a structure in odometer order.
pub fn for_each_world(s: &NetworkStructure, mut visit: impl FnMut(&[usize])) {
    let n = s.len();
    let mut world = vec![0; n];
    loop {
        visit(&world);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            world[i] += 1;
            if world[i] < s.card(i) {
                break;
            }
            world[i] = 0;
        }
    }
}

/// Product of the family entries, computed directly from the tables.
pub fn joint_prob(net: &ProbNetwork, world: &[usize]) -> f64 {
    net.tables().iter().map(|t| t.lookup(world)).product()
}

/// Brute-force `P(pred)` over the full joint.
pub fn brute_prob(net: &ProbNetwork, pred: impl Fn(&[usize]) -> bool) -> f64 {
    let mut total = 0.0;
    for_each_world(net.structure(), |w| {
        if pred(w) {
            total += joint_prob(net, w);
        }
    });
    total
}

/// Brute-force `P(target | evidence)`; `None` when the evidence has probability 0.
pub fn brute_conditional(
    net: &ProbNetwork,
    target: &[(usize, usize)],
    evidence: &[(usize, usize)],
) -> Option<f64> {
    let holds = |lits: &[(usize, usize)], w: &[usize]| lits.iter().all(|&(v, x)| w[v] == x);
    let den = brute_prob(net, |w| holds(evidence, w));
    if den == 0.0 {
        return None;
    }
    Some(brute_prob(net, |w| holds(evidence, w) && holds(target, w)) / den)
}
