mod common;

use kappanet::abstraction::{generate_and, generate_chain, Epsilon};
use kappanet::completeness::check_complete;
use kappanet::model::{parse_prob_network, Evidence, ProbNetwork};
use kappanet::probinfer::{
    bounded_conditioning, exact_query, find_cutset, poole_search, BoundedConfig, Budget, Query,
    SearchConfig, Strategy, TracePoint,
};
use kappanet::random::{random_dag, random_prob_tables, seeded, Shape};
use proptest::prelude::*;

fn eps(v: f64) -> Epsilon {
    Epsilon::new(v).unwrap()
}

fn diamond() -> ProbNetwork {
    parse_prob_network(include_str!("../docs/networks/diamond.json")).unwrap()
}

fn bracketed(trace: &[TracePoint], exact: f64, slack: f64) -> Result<(), String> {
    for pair in trace.windows(2) {
        if pair[1].lower + slack < pair[0].lower || pair[1].upper > pair[0].upper + slack {
            return Err(format!("not monotone at step {}", pair[1].step));
        }
    }
    for p in trace {
        if !(p.lower <= exact + 1e-12 && exact <= p.upper + 1e-12) {
            return Err(format!("step {}: {} not in [{}, {}]", p.step, exact, p.lower, p.upper));
        }
    }
    Ok(())
}

#[test]
fn exact_examples() {
    let chain = generate_chain(3, eps(0.1)).unwrap();
    let q = Query::new(chain.structure(), vec![(2, 0)], vec![]).unwrap();
    assert!((exact_query(&chain, &q).unwrap() - 0.756).abs() < 1e-12);
    let root = Query::new(chain.structure(), vec![(0, 1)], vec![]).unwrap();
    assert!((exact_query(&chain, &root).unwrap() - 0.1).abs() < 1e-15);
    let q = Query::parse(chain.structure(), "x1=x1,x3=not_x3", &Evidence::new()).unwrap();
    assert_eq!(q.target, vec![(0, 0), (2, 1)]);
    assert!(Query::parse(chain.structure(), "x1", &Evidence::new()).is_err());
    assert!(Query::parse(chain.structure(), "x1=x1", &Evidence::new().with("x1", "x1")).is_err());
}

#[test]
fn diamond_cutset_and_exact_bounds() {
    let net = diamond();
    assert_eq!(find_cutset(net.structure()), vec![0]);
    let q = Query::new(net.structure(), vec![(3, 1)], vec![]).unwrap();
    // Every entry exceeds 0.01, so nothing is pruned.
    let out = bounded_conditioning(&net, &q, &BoundedConfig::new(eps(0.01))).unwrap();
    assert!(out.pruned_values.is_empty());
    let exact = exact_query(&net, &q).unwrap();
    assert!((out.bounds.lower - exact).abs() < 1e-12 && (out.bounds.upper - exact).abs() < 1e-12);
    bracketed(&out.trace, exact, 0.0).unwrap();
}

#[test]
fn and_pruned_mass_matches_enumeration() {
    let e = eps(0.2);
    let net = generate_and(3, e).unwrap();
    let q = Query::new(net.structure(), vec![(3, 0)], vec![]).unwrap();
    let mut config = BoundedConfig::new(e);
    config.cutset = Some(vec![0, 1, 2]);
    let out = bounded_conditioning(&net, &q, &config).unwrap();
    let pruned = common::brute_prob(&net, |w| w[..3].iter().any(|&x| x == 1));
    assert!((out.loss.average - pruned).abs() < 1e-12);
    for lm in &out.loss.per_variable {
        assert!((lm - pruned).abs() < 1e-12);
    }
}

#[test]
fn search_on_single_root() {
    let chain = generate_chain(1, eps(0.3)).unwrap();
    let q = Query::new(chain.structure(), vec![(0, 0)], vec![]).unwrap();
    let out = poole_search(&chain, &q, &SearchConfig::new(eps(0.3), Strategy::None)).unwrap();
    assert!(out.expansions <= 2);
    assert!((out.bounds.lower - 0.7).abs() < 1e-15 && (out.bounds.upper - 0.7).abs() < 1e-15);
}

#[test]
fn preprune_chain_of_five() {
    let net = generate_chain(5, eps(0.1)).unwrap();
    let q = Query::new(net.structure(), vec![(4, 0)], vec![]).unwrap();
    let exact = exact_query(&net, &q).unwrap();
    let out = poole_search(&net, &q, &SearchConfig::new(eps(0.1), Strategy::Preprune)).unwrap();
    assert!(out.leaves < 32);
    bracketed(&out.trace, exact, 0.0).unwrap();
    assert!(!out.warnings.is_empty());
    // The guard: the target is large, and its mass was found.
    assert!(exact > 0.1 && out.bounds.lower > 0.0);
}

#[test]
fn budget_exhaustion_keeps_bounds() {
    let net = diamond();
    let q = Query::new(net.structure(), vec![(3, 0)], vec![]).unwrap();
    let mut config = SearchConfig::new(eps(0.1), Strategy::None);
    config.budget = Budget::steps(3);
    let out = poole_search(&net, &q, &config).unwrap();
    assert!(out.exhausted);
    assert_eq!(out.expansions, 3);
    bracketed(&out.trace, exact_query(&net, &q).unwrap(), 0.0).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn greedy_cutset_breaks_loops(seed in any::<u64>()) {
        let s = random_dag(&mut seeded(seed), &Shape::default(), true);
        let cs = find_cutset(&s);
        prop_assert!(check_complete(&s, &cs).is_complete());
        prop_assert_eq!(find_cutset(&s), cs);
    }

    #[test]
    fn anytime_bounds_are_valid(seed in any::<u64>(), e in prop::sample::select(vec![0.2, 0.1, 0.01])) {
        let mut rng = seeded(seed);
        let s = random_dag(&mut rng, &Shape { max_vars: 7, ..Shape::default() }, true);
        let net = random_prob_tables(&mut rng, &s);
        let last = *s.topological_order().last().unwrap();
        let evidence = if seed % 2 == 0 { vec![] } else { vec![(0, 0)] };
        prop_assume!(last != 0 || evidence.is_empty());
        let q = Query::new(&s, vec![(last, 0)], evidence.clone()).unwrap();
        let exact = match common::brute_conditional(&net, &q.target, &q.evidence) {
            Some(p) => p,
            None => return Ok(()),
        };
        let slack = if evidence.is_empty() { 0.0 } else { 1e-12 };
        let out = bounded_conditioning(&net, &q, &BoundedConfig::new(eps(e))).unwrap();
        prop_assert!(bracketed(&out.trace, exact, slack).is_ok(), "{:?}", bracketed(&out.trace, exact, slack));
        if out.pruned_values.is_empty() {
            prop_assert!((out.bounds.lower - exact).abs() < 1e-9 && (out.bounds.upper - exact).abs() < 1e-9);
        }
        for strategy in [Strategy::None, Strategy::Preprune, Strategy::Lookahead] {
            let out = poole_search(&net, &q, &SearchConfig::new(eps(e), strategy)).unwrap();
            prop_assert!(bracketed(&out.trace, exact, slack).is_ok(), "{strategy}: {:?}", bracketed(&out.trace, exact, slack));
            if strategy == Strategy::None {
                prop_assert!((out.bounds.lower - exact).abs() < 1e-9 && (out.bounds.upper - exact).abs() < 1e-9);
            }
        }
    }
}
