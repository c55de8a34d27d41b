//! Structural completeness certificates and definite-quantification detection.

use std::collections::VecDeque;

use serde::Serialize;

use crate::model::{KappaNetwork, NetworkStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Complete,
    PossiblyIncomplete,
}

/// Result of the blocked-backpath check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessCertificate {
    pub verdict: Verdict,
    /// One undirected cycle among the remaining edges, as a closed walk of variables
    /// (first node not repeated). Present iff the verdict is possibly-incomplete.
    pub witness: Option<Vec<usize>>,
    /// Adjacency entries examined; at most twice the edge count.
    pub edges_examined: usize,
}

impl CompletenessCertificate {
    pub fn is_complete(&self) -> bool {
        self.verdict == Verdict::Complete
    }
}

/// Remove every outgoing edge of a believed node, then grow a breadth-first spanning
/// forest over the rest; any cross-edge closes an undirected cycle.
pub fn check_complete(structure: &NetworkStructure, believed: &[usize]) -> CompletenessCertificate {
    let n = structure.len();
    let mut blocked = vec![false; n];
    for &b in believed {
        blocked[b] = true;
    }
    // Adjacency via edge ids so a tree edge is not mistaken for a cross-edge.
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, &(from, to)) in structure.edges().iter().enumerate() {
        if !blocked[from] {
            adjacency[from].push((to, id));
            adjacency[to].push((from, id));
        }
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut examined = 0;
    for start in 0..n {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(w, id) in &adjacency[u] {
                examined += 1;
                if parent[u].map(|(_, pid)| pid) == Some(id) {
                    continue;
                }
                if visited[w] {
                    return CompletenessCertificate {
                        verdict: Verdict::PossiblyIncomplete,
                        witness: Some(close_cycle(&parent, u, w)),
                        edges_examined: examined,
                    };
                }
                visited[w] = true;
                parent[w] = Some((u, id));
                queue.push_back(w);
            }
        }
    }
    CompletenessCertificate {
        verdict: Verdict::Complete,
        witness: None,
        edges_examined: examined,
    }
}

/// Tree paths from `u` and `w` up to their common ancestor, joined by the cross-edge.
fn close_cycle(parent: &[Option<(usize, usize)>], u: usize, w: usize) -> Vec<usize> {
    let up = |mut x: usize| {
        let mut path = vec![x];
        while let Some((p, _)) = parent[x] {
            path.push(p);
            x = p;
        }
        path
    };
    let from_u = up(u);
    let from_w = up(w);
    let meet = *from_u
        .iter()
        .find(|x| from_w.contains(x))
        .expect("same tree");
    let mut cycle: Vec<usize> = from_u.iter().copied().take_while(|&x| x != meet).collect();
    cycle.push(meet);
    let back: Vec<usize> = from_w.iter().copied().take_while(|&x| x != meet).collect();
    cycle.extend(back.into_iter().rev());
    cycle
}

/// Every table row has exactly one value of rank 0.
pub fn is_definite(net: &KappaNetwork) -> bool {
    net.tables()
        .iter()
        .all(|t| t.rows().all(|row| row.iter().filter(|k| k.is_zero()).count() == 1))
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

    fn diamond() -> NetworkStructure {
        structure(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    }

    #[test]
    fn polytree_complete() {
        let s = structure(&["a", "b", "c", "d"], &[("a", "c"), ("b", "c"), ("c", "d")]);
        let cert = check_complete(&s, &[]);
        assert!(cert.is_complete());
        assert!(cert.witness.is_none());
    }

    #[test]
    fn diamond_witness_is_whole_loop() {
        let cert = check_complete(&diamond(), &[]);
        assert_eq!(cert.verdict, Verdict::PossiblyIncomplete);
        let mut w = cert.witness.unwrap();
        w.sort_unstable();
        assert_eq!(w, vec![0, 1, 2, 3]);
    }

    #[test]
    fn believed_root_breaks_loop() {
        assert!(check_complete(&diamond(), &[0]).is_complete());
        // Blocking the sink removes no edges.
        assert!(!check_complete(&diamond(), &[3]).is_complete());
    }

    #[test]
    fn edges_examined_bounded() {
        let s = diamond();
        let cert = check_complete(&s, &[0]);
        assert!(cert.edges_examined <= 2 * s.edge_count());
    }
}
