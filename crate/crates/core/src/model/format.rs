//! JSON network documents.
//!
//! ```json
//! {
//!   "kind": "kappa",
//!   "variables": [{"name": "a", "values": ["a", "not_a"]}, ...],
//!   "edges": [["a", "b"]],
//!   "tables": [
//!     {"child": "a", "parents": [], "rows": [{"given": [], "values": {"a": 0, "not_a": 1}}]},
//!     {"child": "b", "parents": ["a"], "dense": [[0, 1], [1, 0]]}
//!   ]
//! }
//! ```
//!
//! A table lists its rows either keyed (`rows`, one object per parent instantiation)
//! or positionally (`dense`, mixed-radix order with the last parent varying fastest,
//! entries in declared value order). Kappa entries are nonnegative integers or `"inf"`.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{
    AnyNetwork, Kappa, Kind, ModelError, Network, NetworkStructure, Quantity, Table, Variable,
};

/// Tables with more rows than this are written in the dense form.
pub const DENSE_ROW_THRESHOLD: usize = 4096;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    kind: Kind,
    variables: Vec<VariableDoc>,
    #[serde(default)]
    edges: Vec<(String, String)>,
    tables: Vec<TableDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableDoc {
    name: String,
    values: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    child: String,
    #[serde(default)]
    parents: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rows: Option<Vec<RowDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dense: Option<Vec<Vec<Value>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowDoc {
    given: Vec<String>,
    values: Map<String, Value>,
}

trait Codec: Quantity {
    fn decode(value: &Value) -> Result<Self, String>;
    fn encode(self) -> Value;
}

impl Codec for Kappa {
    fn decode(value: &Value) -> Result<Self, String> {
        Kappa::deserialize(value).map_err(|e| e.to_string())
    }

    fn encode(self) -> Value {
        serde_json::to_value(self).expect("kappa serializes")
    }
}

impl Codec for f64 {
    fn decode(value: &Value) -> Result<Self, String> {
        value
            .as_f64()
            .ok_or_else(|| format!("expected a probability, found {value}"))
    }

    fn encode(self) -> Value {
        Value::from(self)
    }
}

/// Parse and fully validate a network document of either kind.
pub fn parse_network(text: &str) -> Result<AnyNetwork, ModelError> {
    let doc: NetworkDoc = serde_json::from_str(text)?;
    Ok(match doc.kind {
        Kind::Kappa => AnyNetwork::Kappa(build(doc)?),
        Kind::Prob => AnyNetwork::Prob(build(doc)?),
    })
}

pub fn parse_kappa_network(text: &str) -> Result<Network<Kappa>, ModelError> {
    parse_network(text)?.into_kappa()
}

pub fn parse_prob_network(text: &str) -> Result<Network<f64>, ModelError> {
    parse_network(text)?.into_prob()
}

fn build<Q: Codec>(doc: NetworkDoc) -> Result<Network<Q>, ModelError> {
    let variables = doc
        .variables
        .into_iter()
        .map(|v| Variable::new(v.name, v.values))
        .collect::<Result<Vec<_>, _>>()?;
    let structure = NetworkStructure::new(variables, doc.edges)?;
    let tables = doc
        .tables
        .into_iter()
        .enumerate()
        .map(|(t, table)| build_table::<Q>(&structure, t, table))
        .collect::<Result<Vec<_>, _>>()?;
    Network::new(structure, tables)
}

fn build_table<Q: Codec>(
    structure: &NetworkStructure,
    t: usize,
    doc: TableDoc,
) -> Result<Table<Q>, ModelError> {
    let here = format!("tables[{t}]");
    let lookup = |name: &str, location: &str| {
        structure
            .index_of(name)
            .ok_or_else(|| ModelError::UnknownVariable {
                name: name.to_string(),
                location: location.to_string(),
            })
    };
    let child = lookup(&doc.child, &here)?;
    let parents = doc
        .parents
        .iter()
        .map(|p| lookup(p, &format!("{here}.parents")))
        .collect::<Result<Vec<_>, _>>()?;
    let parent_cards: Vec<usize> = parents.iter().map(|&p| structure.card(p)).collect();
    let card = structure.card(child);
    let row_count: usize = parent_cards.iter().product();
    let location = format!("{here} (child `{}`)", doc.child);

    let entries = match (doc.rows, doc.dense) {
        (Some(rows), None) => {
            let mut slots: Vec<Option<Q>> = vec![None; row_count * card];
            let mut filled = vec![false; row_count];
            for (k, row) in rows.into_iter().enumerate() {
                let at = format!("{location} rows[{k}]");
                if row.given.len() != parents.len() {
                    return Err(ModelError::RowShape {
                        location: at,
                        reason: format!(
                            "`given` has {} labels for {} parents",
                            row.given.len(),
                            parents.len()
                        ),
                    });
                }
                let mut key = Vec::with_capacity(parents.len());
                for (label, &p) in row.given.iter().zip(&parents) {
                    key.push(structure.variable(p).value_index(label).ok_or_else(|| {
                        ModelError::UnknownValue {
                            variable: structure.name(p).to_string(),
                            value: label.clone(),
                            location: at.clone(),
                        }
                    })?);
                }
                let r = key
                    .iter()
                    .zip(&parent_cards)
                    .fold(0, |acc, (&value, &c)| acc * c + value);
                if std::mem::replace(&mut filled[r], true) {
                    return Err(ModelError::DuplicateRow { location: at });
                }
                for (label, raw) in &row.values {
                    let value = structure.variable(child).value_index(label).ok_or_else(|| {
                        ModelError::UnknownValue {
                            variable: doc.child.clone(),
                            value: label.clone(),
                            location: at.clone(),
                        }
                    })?;
                    let entry = Q::decode(raw).map_err(|reason| ModelError::InvalidEntry {
                        location: format!("{at}.values.{label}"),
                        reason,
                    })?;
                    slots[r * card + value] = Some(entry);
                }
                if let Some(missing) = (0..card).find(|&i| slots[r * card + i].is_none()) {
                    return Err(ModelError::RowShape {
                        location: at,
                        reason: format!(
                            "no entry for value `{}`",
                            structure.variable(child).values()[missing]
                        ),
                    });
                }
            }
            if let Some(r) = filled.iter().position(|f| !f) {
                let key: Vec<String> = key_labels(structure, &parents, &parent_cards, r);
                return Err(ModelError::MissingRow {
                    location: format!("{location} given {key:?}"),
                });
            }
            slots.into_iter().map(|e| e.expect("filled")).collect()
        }
        (None, Some(dense)) => {
            if dense.len() != row_count {
                return Err(ModelError::RowShape {
                    location,
                    reason: format!("dense table has {} rows, expected {row_count}", dense.len()),
                });
            }
            let mut entries = Vec::with_capacity(row_count * card);
            for (r, row) in dense.iter().enumerate() {
                let at = format!("{location} dense[{r}]");
                if row.len() != card {
                    return Err(ModelError::RowShape {
                        location: at,
                        reason: format!("{} entries for {card} values", row.len()),
                    });
                }
                for raw in row {
                    entries.push(
                        Q::decode(raw)
                            .map_err(|reason| ModelError::InvalidEntry { location: at.clone(), reason })?,
                    );
                }
            }
            entries
        }
        _ => {
            return Err(ModelError::RowShape {
                location,
                reason: "exactly one of `rows` or `dense` is required".into(),
            })
        }
    };
    Ok(Table::new(child, card, parents, parent_cards, entries))
}

fn key_labels(
    structure: &NetworkStructure,
    parents: &[usize],
    cards: &[usize],
    mut r: usize,
) -> Vec<String> {
    let mut key = vec![String::new(); parents.len()];
    for i in (0..parents.len()).rev() {
        key[i] = structure.variable(parents[i]).values()[r % cards[i]].clone();
        r /= cards[i];
    }
    key
}

fn to_doc<Q: Codec>(net: &Network<Q>) -> NetworkDoc {
    let s = net.structure();
    let tables = net
        .tables()
        .iter()
        .map(|table| {
            let parents: Vec<String> = table.parents().iter().map(|&p| s.name(p).to_string()).collect();
            let child_values = s.variable(table.child()).values();
            let (rows, dense) = if table.row_count() > DENSE_ROW_THRESHOLD {
                let dense = table
                    .rows()
                    .map(|row| row.iter().map(|&e| e.encode()).collect())
                    .collect();
                (None, Some(dense))
            } else {
                let rows = table
                    .rows()
                    .enumerate()
                    .map(|(r, row)| RowDoc {
                        given: key_labels(s, table.parents(), table.parent_cards(), r),
                        values: child_values
                            .iter()
                            .cloned()
                            .zip(row.iter().map(|&e| e.encode()))
                            .collect(),
                    })
                    .collect();
                (Some(rows), None)
            };
            TableDoc {
                child: s.name(table.child()).to_string(),
                parents,
                rows,
                dense,
            }
        })
        .collect();
    NetworkDoc {
        kind: Q::KIND,
        variables: s
            .variables()
            .iter()
            .map(|v| VariableDoc {
                name: v.name().to_string(),
                values: v.values().to_vec(),
            })
            .collect(),
        edges: s
            .edges()
            .iter()
            .map(|&(a, b)| (s.name(a).to_string(), s.name(b).to_string()))
            .collect(),
        tables,
    }
}

/// Pretty-printed, except that documents with dense tables are written compactly.
fn render(doc: &NetworkDoc) -> String {
    if doc.tables.iter().any(|t| t.dense.is_some()) {
        serde_json::to_string(doc).expect("network serializes")
    } else {
        serde_json::to_string_pretty(doc).expect("network serializes")
    }
}

impl Network<Kappa> {
    pub fn to_json(&self) -> String {
        render(&to_doc(self))
    }
}

impl Network<f64> {
    pub fn to_json(&self) -> String {
        render(&to_doc(self))
    }
}

impl AnyNetwork {
    pub fn to_json(&self) -> String {
        match self {
            AnyNetwork::Kappa(n) => n.to_json(),
            AnyNetwork::Prob(n) => n.to_json(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN: &str = r#"{
      "kind": "kappa",
      "variables": [
        {"name": "rain", "values": ["rain", "not_rain"]},
        {"name": "wet", "values": ["wet", "not_wet"]}
      ],
      "edges": [["rain", "wet"]],
      "tables": [
        {"child": "rain", "parents": [], "rows": [{"given": [], "values": {"rain": 1, "not_rain": 0}}]},
        {"child": "wet", "parents": ["rain"], "rows": [
          {"given": ["rain"], "values": {"wet": 0, "not_wet": "inf"}},
          {"given": ["not_rain"], "values": {"wet": 2, "not_wet": 0}}
        ]}
      ]
    }"#;

    #[test]
    fn two_node_chain() {
        let net = parse_kappa_network(CHAIN).unwrap();
        assert_eq!(net.structure().edge_count(), 1);
        assert_eq!(net.table(1).row(0), &[Kappa::ZERO, Kappa::INFINITY]);
        assert_eq!(net.table(1).row(1), &[Kappa::finite(2), Kappa::ZERO]);
    }

    #[test]
    fn cycle_rejected() {
        let doc = CHAIN.replace(r#""edges": [["rain", "wet"]]"#, r#""edges": [["rain", "wet"], ["wet", "rain"]]"#);
        assert!(matches!(parse_network(&doc), Err(ModelError::Cycle { .. })));
    }

    #[test]
    fn unnormalized_row_rejected() {
        let doc = CHAIN.replace(r#"{"wet": 2, "not_wet": 0}"#, r#"{"wet": 1, "not_wet": 2}"#);
        let err = parse_network(&doc).unwrap_err();
        let ModelError::KappaNotNormalized { location, .. } = err else {
            panic!("expected normalization error, got {err:?}")
        };
        assert!(location.contains("wet") && location.contains("not_rain"), "{location}");
    }

    #[test]
    fn missing_and_duplicate_rows() {
        let missing = CHAIN.replace(
            r#",
          {"given": ["not_rain"], "values": {"wet": 2, "not_wet": 0}}"#,
            "",
        );
        assert!(matches!(parse_network(&missing), Err(ModelError::MissingRow { .. })));
        let dup = CHAIN.replace(r#"["not_rain"]"#, r#"["rain"]"#);
        assert!(matches!(parse_network(&dup), Err(ModelError::DuplicateRow { .. })));
    }

    #[test]
    fn unknown_references() {
        let bad_value = CHAIN.replace(r#"["not_rain"]"#, r#"["drizzle"]"#);
        assert!(matches!(parse_network(&bad_value), Err(ModelError::UnknownValue { .. })));
        let bad_var = CHAIN.replace(r#""parents": ["rain"]"#, r#""parents": ["snow"]"#);
        assert!(matches!(parse_network(&bad_var), Err(ModelError::UnknownVariable { .. })));
    }

    #[test]
    fn probability_rows() {
        let doc = r#"{"kind": "prob",
          "variables": [{"name": "x", "values": ["x", "not_x"]}],
          "tables": [{"child": "x", "dense": [[0.25, 0.75]]}]}"#;
        let net = parse_prob_network(doc).unwrap();
        assert_eq!(net.table(0).row(0), &[0.25, 0.75]);
        let bad = doc.replace("0.75", "0.7");
        assert!(matches!(parse_network(&bad), Err(ModelError::ProbabilitySum { .. })));
    }

    #[test]
    fn roundtrip_keyed() {
        let net = parse_network(CHAIN).unwrap();
        assert_eq!(parse_network(&net.to_json()).unwrap(), net);
    }
}
