mod common;

use kappanet::model::{
    parse_kappa_network, parse_network, parse_prob_network, ActionSet, AnyNetwork, Kappa, ModelError,
};
use kappanet::random::{random_dag, random_kappa_tables, random_prob_tables, seeded, Shape};
use proptest::prelude::*;

#[test]
fn shipped_documents_parse() {
    for text in [
        include_str!("../docs/networks/chain.json"),
        include_str!("../docs/networks/diamond.json"),
        include_str!("../docs/networks/and.json"),
        include_str!("../docs/networks/n1.json"),
        include_str!("../docs/networks/d1.json"),
    ] {
        parse_network(text).unwrap();
    }
}

#[test]
fn n1_topology() {
    let net = common::n1();
    assert_eq!(net.structure().topological_names(), vec!["rain", "sprinkler", "wet"]);
    assert_eq!(net.structure().edge_count(), 2);
}

#[test]
fn non_normalized_row_names_location() {
    let text = include_str!("../docs/networks/n1.json").replace(
        r#"{"wet": 2, "not_wet": 0}"#,
        r#"{"wet": 1, "not_wet": 2}"#,
    );
    let err = parse_kappa_network(&text).unwrap_err();
    match &err {
        ModelError::KappaNotNormalized { location, .. } => assert!(location.contains("wet")),
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn two_way_edge_is_cycle() {
    let text = r#"{"kind": "kappa",
        "variables": [{"name": "a", "values": ["a", "not_a"]}, {"name": "b", "values": ["b", "not_b"]}],
        "edges": [["a", "b"], ["b", "a"]],
        "tables": []}"#;
    assert!(matches!(parse_network(text), Err(ModelError::Cycle { .. })));
}

#[test]
fn surgery_on_chain() {
    let net = parse_kappa_network(include_str!("../docs/networks/chain_kappa.json")).unwrap();
    let forced = net.apply_actions(&ActionSet::new().with("x2", "x2")).unwrap();
    let s = forced.structure();
    let x2 = s.index_of("x2").unwrap();
    assert!(s.is_root(x2));
    assert_eq!(forced.table(x2).row(0), &[Kappa::ZERO, Kappa::INFINITY]);
    assert_eq!(net.apply_actions(&ActionSet::new()).unwrap(), net);
}

#[test]
fn prob_document_rejects_kappa_reader() {
    let err = parse_kappa_network(include_str!("../docs/networks/and.json")).unwrap_err();
    assert!(matches!(err, ModelError::WrongKind { .. }));
    parse_prob_network(include_str!("../docs/networks/and.json")).unwrap();
}

proptest! {
    #[test]
    fn kappa_round_trip(seed in any::<u64>(), definite in any::<bool>()) {
        let mut rng = seeded(seed);
        let s = random_dag(&mut rng, &Shape::default(), false);
        let net = random_kappa_tables(&mut rng, &s, definite);
        let back = parse_kappa_network(&net.to_json()).unwrap();
        prop_assert_eq!(back, net);
    }

    #[test]
    fn prob_round_trip(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let s = random_dag(&mut rng, &Shape::default(), true);
        let net = random_prob_tables(&mut rng, &s);
        let back = parse_network(&net.to_json()).unwrap();
        prop_assert_eq!(back, AnyNetwork::Prob(net));
    }

    #[test]
    fn surgery_is_idempotent_and_valid(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let s = random_dag(&mut rng, &Shape::default(), false);
        let net = random_kappa_tables(&mut rng, &s, false);
        let actions = kappanet::random::random_actions(&mut rng, &s);
        let once = net.apply_actions(&actions).unwrap();
        let twice = once.apply_actions(&actions).unwrap();
        prop_assert_eq!(&once, &twice);
        // Re-validating the surgered network through its document form.
        prop_assert_eq!(parse_kappa_network(&once.to_json()).unwrap(), once);
    }

    #[test]
    fn topological_order_respects_edges(seed in any::<u64>()) {
        let s = random_dag(&mut seeded(seed), &Shape::default(), false);
        let order = s.topological_order();
        let pos: Vec<usize> = (0..s.len()).map(|v| order.iter().position(|&u| u == v).unwrap()).collect();
        for &(a, b) in s.edges() {
            prop_assert!(pos[a] < pos[b]);
        }
    }
}
