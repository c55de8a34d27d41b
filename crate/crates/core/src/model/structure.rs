use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use super::ModelError;

/// A discrete variable with an ordered domain of at least two labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    name: String,
    values: Vec<String>,
}

impl Variable {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        values: impl IntoIterator<Item = S>,
    ) -> Result<Self, ModelError> {
        let name = name.into();
        let values: Vec<String> = values.into_iter().map(Into::into).collect();
        if values.len() < 2 {
            return Err(ModelError::TooFewValues { variable: name });
        }
        let mut seen = HashSet::new();
        for value in &values {
            if !seen.insert(value.as_str()) {
                return Err(ModelError::DuplicateValue {
                    variable: name,
                    value: value.clone(),
                });
            }
        }
        Ok(Variable { name, values })
    }

    /// A two-valued variable with labels `name` and `not_name`.
    pub fn binary(name: impl Into<String>) -> Self {
        let name = name.into();
        let values = vec![name.clone(), format!("not_{name}")];
        Variable { name, values }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn card(&self) -> usize {
        self.values.len()
    }

    pub fn value_index(&self, label: &str) -> Option<usize> {
        self.values.iter().position(|v| v == label)
    }
}

/// A validated directed acyclic graph over discrete variables.
///
/// Variables are addressed by their declaration index everywhere in the crate.
#[derive(Clone, Debug)]
pub struct NetworkStructure {
    variables: Vec<Variable>,
    edges: Vec<(usize, usize)>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    order: Vec<usize>,
}

impl PartialEq for NetworkStructure {
    fn eq(&self, other: &Self) -> bool {
        self.variables == other.variables && self.edges == other.edges
    }
}

impl NetworkStructure {
    pub fn new<S: AsRef<str>>(
        variables: Vec<Variable>,
        edges: impl IntoIterator<Item = (S, S)>,
    ) -> Result<Self, ModelError> {
        let mut index = HashMap::with_capacity(variables.len());
        for (i, var) in variables.iter().enumerate() {
            if index.insert(var.name.clone(), i).is_some() {
                return Err(ModelError::DuplicateVariable {
                    name: var.name.clone(),
                });
            }
        }
        let mut indexed = Vec::new();
        for (k, (from, to)) in edges.into_iter().enumerate() {
            let lookup = |name: &str| {
                index.get(name).copied().ok_or_else(|| ModelError::UnknownVariable {
                    name: name.to_string(),
                    location: format!("edges[{k}]"),
                })
            };
            indexed.push((lookup(from.as_ref())?, lookup(to.as_ref())?));
        }
        Self::from_indices(variables, indexed)
    }

    pub(crate) fn from_indices(
        variables: Vec<Variable>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, ModelError> {
        let n = variables.len();
        let mut index = HashMap::with_capacity(n);
        for (i, var) in variables.iter().enumerate() {
            if index.insert(var.name.clone(), i).is_some() {
                return Err(ModelError::DuplicateVariable {
                    name: var.name.clone(),
                });
            }
        }
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        for &(from, to) in &edges {
            assert!(from < n && to < n, "edge endpoint out of range");
            if !seen.insert((from, to)) {
                return Err(ModelError::DuplicateEdge {
                    from: variables[from].name.clone(),
                    to: variables[to].name.clone(),
                });
            }
            if from == to {
                return Err(ModelError::Cycle {
                    path: vec![variables[from].name.clone(), variables[to].name.clone()],
                });
            }
            parents[to].push(from);
            children[from].push(to);
        }
        let mut structure = NetworkStructure {
            variables,
            edges,
            parents,
            children,
            index,
            order: Vec::new(),
        };
        structure.order = structure.compute_order()?;
        Ok(structure)
    }

    /// Kahn's algorithm with a min-heap on declaration index, so ties resolve by
    /// declaration order.
    fn compute_order(&self) -> Result<Vec<usize>, ModelError> {
        let n = self.len();
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> = (0..n)
            .filter(|&v| indegree[v] == 0)
            .map(Reverse)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &c in &self.children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    ready.push(Reverse(c));
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err(ModelError::Cycle {
                path: self.find_cycle(&indegree),
            })
        }
    }

    /// Walk parent links among the nodes Kahn could not release until a node repeats.
    fn find_cycle(&self, indegree: &[usize]) -> Vec<String> {
        let stuck: Vec<bool> = indegree.iter().map(|&d| d > 0).collect();
        let start = stuck.iter().position(|&s| s).expect("cycle exists");
        let mut path = vec![start];
        let mut position = HashMap::from([(start, 0usize)]);
        let mut current = start;
        loop {
            let next = *self.parents[current]
                .iter()
                .find(|&&p| stuck[p])
                .expect("stuck node has a stuck parent");
            if let Some(&at) = position.get(&next) {
                let mut cycle: Vec<usize> = path[at..].to_vec();
                cycle.reverse();
                cycle.push(cycle[0]);
                return cycle.iter().map(|&v| self.variables[v].name.clone()).collect();
            }
            position.insert(next, path.len());
            path.push(next);
            current = next;
        }
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, v: usize) -> &Variable {
        &self.variables[v]
    }

    pub fn name(&self, v: usize) -> &str {
        &self.variables[v].name
    }

    pub fn card(&self, v: usize) -> usize {
        self.variables[v].card()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Edges as (parent, child) index pairs, in declaration order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.parents[v].is_empty()
    }

    /// Topological order; every parent precedes its children, ties by declaration order.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    /// Topological order as variable names.
    pub fn topological_names(&self) -> Vec<&str> {
        self.order.iter().map(|&v| self.name(v)).collect()
    }

    /// Product of domain sizes over `vars`, saturating at `u64::MAX`.
    pub fn space_size(&self, vars: impl IntoIterator<Item = usize>) -> u64 {
        vars.into_iter()
            .fold(1u64, |acc, v| acc.saturating_mul(self.card(v) as u64))
    }

    /// Copy of this structure with every edge into any of `targets` removed.
    pub fn without_incoming(&self, targets: &[usize]) -> NetworkStructure {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|(_, to)| !targets.contains(to))
            .collect();
        NetworkStructure::from_indices(self.variables.clone(), edges)
            .expect("removing edges preserves validity")
    }

    /// Undirected adjacency lists (neighbors via either edge direction).
    pub fn undirected_neighbors(&self) -> Vec<Vec<usize>> {
        (0..self.len())
            .map(|v| {
                self.parents[v]
                    .iter()
                    .chain(self.children[v].iter())
                    .copied()
                    .collect()
            })
            .collect()
    }

    /// All ancestors of `v`, including `v` itself.
    pub fn ancestors(&self, v: usize) -> Vec<bool> {
        let mut mark = vec![false; self.len()];
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if !mark[u] {
                mark[u] = true;
                stack.extend(self.parents[u].iter().copied());
            }
        }
        mark
    }
}
