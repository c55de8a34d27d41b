//! A single sweep on a diamond can leave an impossible value plausible. The structural
//! check flags it, and staged completion recovers the exact answer.

use kappanet::completeness::check_complete;
use kappanet::model::{parse_kappa_network, ActionSet, Evidence};
use kappanet::oracle::KappaOracle;
use kappanet::predict::predict;
use kappanet::scomplete::{scomplete, ScompleteConfig};

fn main() {
    let net = parse_kappa_network(include_str!("../docs/networks/d1.json")).expect("shipped network");
    let s = net.structure();
    let d = s.index_of("d").unwrap();

    let run = predict(&net, &Evidence::new(), &ActionSet::new()).unwrap();
    let believed: Vec<usize> = run.plsets.believed().into_iter().map(|(v, _)| v).collect();
    let cert = check_complete(s, &believed);
    println!("predict:  PlSet(d) has {} values", run.plsets.get(d).len());
    println!("verdict:  {:?}, witness {:?}", cert.verdict, cert.witness);

    let exact = KappaOracle::new(&net).exact_plausible_set(d, &[]).unwrap();
    println!("oracle:   PlSet(d) has {} value(s)", exact.len());

    let out = scomplete(&net, &Evidence::new(), &ActionSet::new(), ScompleteConfig::default()).unwrap();
    for stage in &out.stages {
        println!(
            "stage {}: cut set {:?}, {} instantiation(s), PlSet(d) has {} value(s)",
            stage.state.stage,
            stage.state.cut_set,
            stage.instances,
            stage.plsets.get(d).len()
        );
    }
    assert_eq!(out.plsets.get(d), &exact);
}
