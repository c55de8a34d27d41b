//! Best-first search bounds on a chain, comparing the three pruning strategies.

use kappanet::abstraction::{generate_chain, Epsilon};
use kappanet::probinfer::{exact_query, poole_search, Budget, Query, SearchConfig, Strategy};

fn main() {
    let eps = Epsilon::new(0.1).unwrap();
    let net = generate_chain(8, eps).unwrap();
    let q = Query::new(net.structure(), vec![(7, 0)], vec![]).unwrap();
    println!("exact P(x8) = {:.6}", exact_query(&net, &q).unwrap());

    for strategy in [Strategy::None, Strategy::Preprune, Strategy::Lookahead] {
        let out = poole_search(&net, &q, &SearchConfig::new(eps, strategy)).unwrap();
        println!(
            "{strategy:<9} leaves {:>3}  expansions {:>3}  pruned mass {:.4}  [{:.6}, {:.6}]",
            out.leaves, out.expansions, out.pruned_mass, out.bounds.lower, out.bounds.upper
        );
    }

    let mut limited = SearchConfig::new(eps, Strategy::None);
    limited.budget = Budget::steps(10);
    let out = poole_search(&net, &q, &limited).unwrap();
    println!("10 expansions: [{:.6}, {:.6}] exhausted={}", out.bounds.lower, out.bounds.upper, out.exhausted);
}
