//! Plausible sets for the rain/sprinkler/wet network, with and without an observation.

use kappanet::model::{parse_kappa_network, ActionSet, Evidence};
use kappanet::predict::predict;

fn main() {
    let net = parse_kappa_network(include_str!("../docs/networks/n1.json")).expect("shipped network");
    let s = net.structure();

    for evidence in [Evidence::new(), Evidence::new().with("rain", "rain")] {
        let run = predict(&net, &evidence, &ActionSet::new()).expect("valid evidence");
        println!("evidence: {evidence:?}");
        for v in 0..s.len() {
            let values: Vec<&str> = run.plsets.get(v).iter().map(|x| s.variable(v).values()[x].as_str()).collect();
            println!("  {:<10} {{{}}}", s.name(v), values.join(", "));
        }
        println!("  ops: {}", run.ops.total());
    }
}
