//! Greedy loop cutset construction.

use crate::completeness::check_complete;
use crate::model::NetworkStructure;
use crate::scomplete::strip_dangling;

/// A set of variables whose outgoing arcs, once removed, leave no undirected cycle.
///
/// Repeatedly takes the node of the remaining loop core with the most outgoing arcs
/// inside the core (then most arcs overall, then earliest declared). Returned in
/// declaration order.
pub fn find_cutset(structure: &NetworkStructure) -> Vec<usize> {
    let n = structure.len();
    let mut cutset: Vec<usize> = Vec::new();
    while !check_complete(structure, &cutset).is_complete() {
        let edges: Vec<(usize, usize)> = structure
            .edges()
            .iter()
            .copied()
            .filter(|(from, _)| !cutset.contains(from))
            .collect();
        let core = strip_dangling(vec![true; n], edges);
        let mut out = vec![0usize; n];
        let mut degree = vec![0usize; n];
        for &(a, b) in &core.edges {
            out[a] += 1;
            degree[a] += 1;
            degree[b] += 1;
        }
        let pick = core
            .nodes
            .iter()
            .copied()
            .filter(|&v| out[v] > 0)
            .max_by_key(|&v| (out[v], degree[v], std::cmp::Reverse(v)))
            .expect("a non-empty loop core has an arc");
        cutset.push(pick);
    }
    cutset.sort_unstable();
    cutset
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Variable;

    fn structure(names: &[&str], edges: &[(&str, &str)]) -> NetworkStructure {
        NetworkStructure::new(
            names.iter().map(|n| Variable::binary(*n)).collect(),
            edges.iter().copied(),
        )
        .unwrap()
    }

    #[test]
    fn polytree_needs_nothing() {
        let s = structure(&["a", "b", "c"], &[("a", "c"), ("b", "c")]);
        assert!(find_cutset(&s).is_empty());
    }

    #[test]
    fn diamond_cut_at_top() {
        let s = structure(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]);
        assert_eq!(find_cutset(&s), vec![0]);
    }

    #[test]
    fn stacked_diamonds() {
        let s = structure(
            &["a", "b", "c", "d", "e", "f", "g"],
            &[
                ("a", "b"),
                ("a", "c"),
                ("b", "d"),
                ("c", "d"),
                ("d", "e"),
                ("d", "f"),
                ("e", "g"),
                ("f", "g"),
            ],
        );
        let cs = find_cutset(&s);
        assert_eq!(cs.len(), 2);
        assert!(check_complete(&s, &cs).is_complete());
    }
}
