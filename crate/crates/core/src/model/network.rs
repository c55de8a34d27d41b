use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Kappa, Kind, ModelError, NetworkStructure, Quantity, RowDefect, Table};

/// A DAG plus one conditional table per variable.
///
/// Immutable once built; every constructor validates the full set of invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct Network<Q> {
    structure: NetworkStructure,
    tables: Vec<Table<Q>>,
}

/// Network quantified with conditional kappa rankings.
pub type KappaNetwork = Network<Kappa>;
/// Network quantified with conditional probabilities.
pub type ProbNetwork = Network<f64>;

impl<Q: Quantity> Network<Q> {
    /// Validate and assemble. `tables` may be given in any order; exactly one per variable.
    pub fn new(structure: NetworkStructure, tables: Vec<Table<Q>>) -> Result<Self, ModelError> {
        let n = structure.len();
        let mut slots: Vec<Option<Table<Q>>> = (0..n).map(|_| None).collect();
        for table in tables {
            let child = table.child();
            let name = structure.name(child).to_string();
            if slots[child].is_some() {
                return Err(ModelError::DuplicateTable { child: name });
            }
            let mut declared: Vec<usize> = table.parents().to_vec();
            let mut actual: Vec<usize> = structure.parents(child).to_vec();
            declared.sort_unstable();
            actual.sort_unstable();
            if declared != actual || declared.windows(2).any(|w| w[0] == w[1]) {
                return Err(ModelError::ParentMismatch {
                    child: name,
                    declared: table.parents().iter().map(|&p| structure.name(p).to_string()).collect(),
                    graph: structure.parents(child).iter().map(|&p| structure.name(p).to_string()).collect(),
                });
            }
            let cards_ok = table.child_card() == structure.card(child)
                && table
                    .parents()
                    .iter()
                    .zip(table.parent_cards())
                    .all(|(&p, &c)| structure.card(p) == c);
            if !cards_ok {
                return Err(ModelError::TableShape { child: name });
            }
            for (r, row) in table.rows().enumerate() {
                if let Err(defect) = Q::check_row(row) {
                    let location = row_location(&structure, &table, r);
                    return Err(match defect {
                        RowDefect::KappaNotNormalized { min } => {
                            ModelError::KappaNotNormalized { location, min }
                        }
                        RowDefect::ProbabilitySum { sum } => {
                            ModelError::ProbabilitySum { location, sum }
                        }
                        RowDefect::ProbabilityOutOfRange { value } => ModelError::InvalidEntry {
                            location,
                            reason: format!("probability {value} outside [0, 1]"),
                        },
                    });
                }
            }
            slots[child] = Some(table);
        }
        let tables = slots
            .into_iter()
            .enumerate()
            .map(|(v, t)| {
                t.ok_or_else(|| ModelError::MissingTable {
                    child: structure.name(v).to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Network { structure, tables })
    }

    pub fn kind(&self) -> Kind {
        Q::KIND
    }

    pub fn structure(&self) -> &NetworkStructure {
        &self.structure
    }

    pub fn tables(&self) -> &[Table<Q>] {
        &self.tables
    }

    pub fn table(&self, v: usize) -> &Table<Q> {
        &self.tables[v]
    }

    pub fn len(&self) -> usize {
        self.structure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structure.is_empty()
    }

    /// Action surgery: each forced variable loses its incoming edges and gets an
    /// unconditional table that is certain of the forced value.
    pub fn apply_actions(&self, actions: &ActionSet) -> Result<Self, ModelError> {
        let forced = actions.resolve(&self.structure, "actions")?;
        if forced.is_empty() {
            return Ok(self.clone());
        }
        let targets: Vec<usize> = forced.iter().map(|&(v, _)| v).collect();
        let structure = self.structure.without_incoming(&targets);
        let mut tables = self.tables.clone();
        for &(v, value) in &forced {
            let entries = (0..structure.card(v))
                .map(|i| if i == value { Q::CERTAIN } else { Q::IMPOSSIBLE })
                .collect();
            tables[v] = Table::prior(v, entries);
        }
        Network::new(structure, tables)
    }

    /// Product/sum of local entries is left to callers; this just walks the families.
    pub fn local_entries<'a>(&'a self, world: &'a [usize]) -> impl Iterator<Item = Q> + 'a {
        self.tables.iter().map(move |t| t.lookup(world))
    }
}

pub(crate) fn row_location<Q: Quantity>(
    structure: &NetworkStructure,
    table: &Table<Q>,
    r: usize,
) -> String {
    let key: Vec<&str> = table
        .row_key(r)
        .iter()
        .zip(table.parents())
        .map(|(&value, &p)| structure.variable(p).values()[value].as_str())
        .collect();
    format!("table `{}` row {:?}", structure.name(table.child()), key)
}

/// Either quantification, as read from a network document.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyNetwork {
    Kappa(KappaNetwork),
    Prob(ProbNetwork),
}

impl AnyNetwork {
    pub fn kind(&self) -> Kind {
        match self {
            AnyNetwork::Kappa(_) => Kind::Kappa,
            AnyNetwork::Prob(_) => Kind::Prob,
        }
    }

    pub fn structure(&self) -> &NetworkStructure {
        match self {
            AnyNetwork::Kappa(n) => n.structure(),
            AnyNetwork::Prob(n) => n.structure(),
        }
    }

    pub fn into_kappa(self) -> Result<KappaNetwork, ModelError> {
        match self {
            AnyNetwork::Kappa(n) => Ok(n),
            AnyNetwork::Prob(_) => Err(ModelError::WrongKind {
                expected: Kind::Kappa,
                found: Kind::Prob,
            }),
        }
    }

    pub fn into_prob(self) -> Result<ProbNetwork, ModelError> {
        match self {
            AnyNetwork::Prob(n) => Ok(n),
            AnyNetwork::Kappa(_) => Err(ModelError::WrongKind {
                expected: Kind::Prob,
                found: Kind::Kappa,
            }),
        }
    }
}

impl From<KappaNetwork> for AnyNetwork {
    fn from(n: KappaNetwork) -> Self {
        AnyNetwork::Kappa(n)
    }
}

impl From<ProbNetwork> for AnyNetwork {
    fn from(n: ProbNetwork) -> Self {
        AnyNetwork::Prob(n)
    }
}

/// Variable name → value label. Serialized as a flat JSON object.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(pub BTreeMap<String, String>);

/// Observations; Predict accepts them only on roots.
pub type Evidence = Assignment;
/// Forced values for action surgery.
pub type ActionSet = Assignment;

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, variable: impl Into<String>, value: impl Into<String>) -> Self {
        self.0.insert(variable.into(), value.into());
        self
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Resolve to (variable, value) index pairs, sorted by variable index.
    pub fn resolve(
        &self,
        structure: &NetworkStructure,
        what: &str,
    ) -> Result<Vec<(usize, usize)>, ModelError> {
        let mut out = Vec::with_capacity(self.0.len());
        for (name, label) in &self.0 {
            let v = structure
                .index_of(name)
                .ok_or_else(|| ModelError::UnknownVariable {
                    name: name.clone(),
                    location: what.to_string(),
                })?;
            let value = structure.variable(v).value_index(label).ok_or_else(|| {
                ModelError::UnknownValue {
                    variable: name.clone(),
                    value: label.clone(),
                    location: what.to_string(),
                }
            })?;
            out.push((v, value));
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Per-variable optional value, indexed by variable.
    pub fn resolve_partial(
        &self,
        structure: &NetworkStructure,
        what: &str,
    ) -> Result<Vec<Option<usize>>, ModelError> {
        let mut partial = vec![None; structure.len()];
        for (v, value) in self.resolve(structure, what)? {
            partial[v] = Some(value);
        }
        Ok(partial)
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }
}
