//! Network representation shared by every other module: variables, the DAG,
//! conditional tables (kappa or probability), evidence, action surgery, and the
//! JSON document format.

mod format;
mod kappa;
mod network;
mod structure;
mod table;

pub use format::{parse_kappa_network, parse_network, parse_prob_network, DENSE_ROW_THRESHOLD};
pub use kappa::Kappa;
pub use network::{ActionSet, AnyNetwork, Assignment, Evidence, KappaNetwork, Network, ProbNetwork};
pub use structure::{NetworkStructure, Variable};
pub use table::{Kind, Quantity, RowDefect, Table, PROB_ROW_TOLERANCE};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("variable `{name}` declared twice")]
    DuplicateVariable { name: String },
    #[error("variable `{variable}` lists value `{value}` twice")]
    DuplicateValue { variable: String, value: String },
    #[error("variable `{variable}` needs at least two values")]
    TooFewValues { variable: String },
    #[error("unknown variable `{name}` in {location}")]
    UnknownVariable { name: String, location: String },
    #[error("unknown value `{value}` for variable `{variable}` in {location}")]
    UnknownValue {
        variable: String,
        value: String,
        location: String,
    },
    #[error("edge {from} -> {to} listed twice")]
    DuplicateEdge { from: String, to: String },
    #[error("cycle detected: {}", path.join(" -> "))]
    Cycle { path: Vec<String> },
    #[error("no table for variable `{child}`")]
    MissingTable { child: String },
    #[error("variable `{child}` has more than one table")]
    DuplicateTable { child: String },
    #[error("table for `{child}` lists parents {declared:?} but the graph has {graph:?}")]
    ParentMismatch {
        child: String,
        declared: Vec<String>,
        graph: Vec<String>,
    },
    #[error("table for `{child}` does not match the variable domains")]
    TableShape { child: String },
    #[error("missing row in {location}")]
    MissingRow { location: String },
    #[error("row listed twice in {location}")]
    DuplicateRow { location: String },
    #[error("malformed row in {location}: {reason}")]
    RowShape { location: String, reason: String },
    #[error("invalid entry in {location}: {reason}")]
    InvalidEntry { location: String, reason: String },
    #[error("kappa row not normalized in {location}: minimum is {min}, expected 0")]
    KappaNotNormalized { location: String, min: Kappa },
    #[error("probability row in {location} sums to {sum}, expected 1")]
    ProbabilitySum { location: String, sum: f64 },
    #[error("expected a {expected:?} network, found {found:?}")]
    WrongKind { expected: Kind, found: Kind },
}
