//! Load any network document given on the command line and summarize it.
//!
//! cargo run --example load_network_file -- crates/core/docs/networks/chain.json

use kappanet::model::{parse_network, AnyNetwork};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| "crates/core/docs/networks/n1.json".into());
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    let net = match parse_network(&text) {
        Ok(net) => net,
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(2);
        }
    };
    let s = net.structure();
    let kind = match &net {
        AnyNetwork::Kappa(_) => "kappa",
        AnyNetwork::Prob(_) => "prob",
    };
    println!("{path}: {kind} network, {} variables, {} edges", s.len(), s.edge_count());
    println!("topological order: {}", s.topological_names().join(" "));
    for v in 0..s.len() {
        let parents: Vec<&str> = s.parents(v).iter().map(|&p| s.name(p)).collect();
        println!("  {} ({} values) <- [{}]", s.name(v), s.card(v), parents.join(", "));
    }
}
