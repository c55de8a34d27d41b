//! Stratify a probability network at several ε and look at what the abstraction
//! believes. The AND network shows a believed-plausible value with probability below ε.

use kappanet::abstraction::{epsilon_omp, generate_and, stratum, Epsilon};
use kappanet::model::{ActionSet, Evidence};
use kappanet::predict::predict;
use kappanet::probinfer::{exact_query_with_cap, Query};

fn main() {
    for e in [0.3, 0.1, 0.01] {
        let eps = Epsilon::new(e).unwrap();
        let ranks: Vec<String> = [0.9, 0.2, 0.05, 0.001, 0.0]
            .iter()
            .map(|&p| format!("{p}->{}", stratum(p, eps).rank().map_or("inf".into(), |k| k.to_string())))
            .collect();
        println!("ε = {e:<5} {}", ranks.join("  "));
    }

    let eps = Epsilon::new(0.1).unwrap();
    for n in [4, 16, 22] {
        let net = generate_and(n, eps).unwrap();
        let y = n;
        let q = Query::new(net.structure(), vec![(y, 0)], vec![]).unwrap();
        let p = exact_query_with_cap(&net, &q, 1 << 24).unwrap();
        let abs = epsilon_omp(&net, eps);
        let run = predict(&abs.network, &Evidence::new(), &ActionSet::new()).unwrap();
        println!(
            "AND-{n:<2} P(y) = {p:.4}  y plausible: {}  rows shifted: {}",
            run.plsets.get(y).contains(0),
            abs.shifts.len()
        );
    }
}
