//! Observing wet grass versus forcing it wet: an observation of a root propagates
//! downstream, an action cuts the variable off from its causes.

use kappanet::model::{parse_kappa_network, ActionSet, Evidence, KappaNetwork};
use kappanet::predict::predict;

fn show(net: &KappaNetwork, label: &str, evidence: &Evidence, actions: &ActionSet) {
    let run = predict(net, evidence, actions).unwrap();
    let s = run.network.structure();
    let sets: Vec<String> = (0..s.len())
        .map(|v| {
            let vals: Vec<&str> = run.plsets.get(v).iter().map(|x| s.variable(v).values()[x].as_str()).collect();
            format!("{}={{{}}}", s.name(v), vals.join(","))
        })
        .collect();
    println!("{label:<24} {}", sets.join("  "));
}

fn main() {
    let net = parse_kappa_network(include_str!("../docs/networks/n1.json")).unwrap();
    show(&net, "no input", &Evidence::new(), &ActionSet::new());
    show(&net, "observe not_sprinkler", &Evidence::new().with("sprinkler", "not_sprinkler"), &ActionSet::new());
    show(&net, "do(wet)", &Evidence::new(), &ActionSet::new().with("wet", "wet"));
    show(
        &net,
        "do(wet), observe rain",
        &Evidence::new().with("rain", "rain"),
        &ActionSet::new().with("wet", "wet"),
    );
}
