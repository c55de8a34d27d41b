mod common;

use std::collections::BTreeSet;

use kappanet::model::Evidence;
use kappanet::predict::{predict, Provenance, ValueSet};
use kappanet::random::{random_actions, random_dag, random_kappa_tables, random_polytree, random_root_evidence, seeded, Shape};
use kappanet::scomplete::{isolate_loops, scomplete, ScompleteConfig, ScompleteError};
use proptest::prelude::*;

fn none() -> Evidence {
    Evidence::new()
}

#[test]
fn d1_completed_in_one_stage() {
    let net = common::d1();
    assert_eq!(isolate_loops(net.structure(), &BTreeSet::new()).nodes, BTreeSet::from([0, 1, 2, 3]));
    let out = scomplete(&net, &none(), &none(), ScompleteConfig::default()).unwrap();
    assert_eq!(out.stages.len(), 1);
    assert_eq!(out.stages[0].state.cut_set, vec![0]);
    assert_eq!(out.stages[0].instances, 2);
    assert_eq!(out.plsets.get(3), &ValueSet::singleton(2, 0));
    assert_eq!(out.plsets.provenance(), Provenance::CompleteCertified);
    assert_eq!(out.initial.get(3), &ValueSet::full(2));
}

#[test]
fn believed_root_needs_no_stage() {
    let net = common::d1_believed_root();
    let out = scomplete(&net, &none(), &none(), ScompleteConfig::default()).unwrap();
    assert!(out.stages.is_empty());
    assert_eq!(out.plsets.sets(), predict(&net, &none(), &none()).unwrap().plsets.sets());
}

#[test]
fn cap_reports_partial_result() {
    let net = common::d1();
    match scomplete(&net, &none(), &none(), ScompleteConfig { cs_cap: 1 }) {
        Err(ScompleteError::CapExceeded { space, partial, .. }) => {
            assert_eq!(space, 2);
            assert_eq!(partial.get(3), &ValueSet::full(2));
        }
        other => panic!("expected cap error, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn polytree_matches_predict(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let s = random_polytree(&mut rng, &Shape::default());
        let net = random_kappa_tables(&mut rng, &s, false);
        let out = scomplete(&net, &none(), &none(), ScompleteConfig::default()).unwrap();
        prop_assert!(out.stages.is_empty());
        prop_assert_eq!(&out.plsets.sets(), &out.initial.sets());
    }

    #[test]
    fn exact_and_monotone(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let s = random_dag(&mut rng, &Shape::default(), true);
        let net = random_kappa_tables(&mut rng, &s, false);
        let actions = random_actions(&mut rng, &s);
        let evidence = random_root_evidence(&mut rng, &net.apply_actions(&actions).unwrap());
        let exact = common::exact_sets(&net, &evidence, &actions);
        let out = scomplete(&net, &evidence, &actions, ScompleteConfig::default()).unwrap();
        let mut previous = out.initial.clone();
        for stage in &out.stages {
            prop_assert!(stage.plsets.is_subset(&previous));
            for (v, set) in exact.iter().enumerate() {
                prop_assert!(set.is_subset(stage.plsets.get(v)));
            }
            previous = stage.plsets.clone();
        }
        prop_assert_eq!(out.plsets.sets(), exact.as_slice());
    }
}
