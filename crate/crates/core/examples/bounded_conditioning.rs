//! Anytime bounds from cutset conditioning on a seeded random loopy network, at three ε.
//! Larger ε prunes more cutset instances, which shows up as loss of mass.

use kappanet::abstraction::Epsilon;
use kappanet::probinfer::{bounded_conditioning, exact_query, BoundedConfig, Query};
use kappanet::random::{random_dag, random_prob_tables, seeded, Shape};

const SEED: u64 = 1;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(SEED);
    let mut rng = seeded(seed);
    let s = random_dag(&mut rng, &Shape { max_vars: 8, ..Shape::default() }, true);
    let net = random_prob_tables(&mut rng, &s);
    let last = *s.topological_order().last().unwrap();
    let q = Query::new(&s, vec![(last, 0)], vec![]).unwrap();
    let exact = exact_query(&net, &q).unwrap();
    println!("{} variables, {} edges; exact P({}={}) = {exact:.6}", s.len(), s.edge_count(), s.name(last), s.variable(last).values()[0]);

    for e in [0.3, 0.1, 0.01] {
        let out = bounded_conditioning(&net, &q, &BoundedConfig::new(Epsilon::new(e).unwrap())).unwrap();
        println!(
            "ε = {e:<4} cutset {:?}  instances {}  pruned {}  [{:.6}, {:.6}]  LM {:.4}",
            out.cutset,
            out.instances.len(),
            out.pruned_instances,
            out.bounds.lower,
            out.bounds.upper,
            out.loss.average
        );
    }
}
