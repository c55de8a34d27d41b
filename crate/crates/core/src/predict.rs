//! Plausible-set propagation in one topological sweep.
//!
//! A root keeps the values of rank 0 in its prior. A non-root value is plausible when
//! some parent instantiation drawn entirely from the parents' plausible sets gives it
//! local rank 0. Only the 0 / >0 distinction is tracked; magnitudes are never emitted.

use std::fmt;

use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::model::{ActionSet, Evidence, KappaNetwork, ModelError, NetworkStructure};

#[derive(Debug, Error)]
pub enum PredictError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("evidence on `{0}`, which is not a root")]
    EvidenceOnNonRoot(String),
    #[error("evidence `{variable}` = `{value}` has rank INFINITY")]
    InconsistentEvidence { variable: String, value: String },
    #[error("clamp on `{variable}` conflicts with its evidence")]
    InconsistentClamp { variable: String },
}

/// A subset of one variable's domain.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ValueSet(Vec<bool>);

impl ValueSet {
    pub fn empty(card: usize) -> Self {
        ValueSet(vec![false; card])
    }

    pub fn full(card: usize) -> Self {
        ValueSet(vec![true; card])
    }

    pub fn singleton(card: usize, value: usize) -> Self {
        let mut set = Self::empty(card);
        set.insert(value);
        set
    }

    pub fn from_predicate(card: usize, pred: impl Fn(usize) -> bool) -> Self {
        ValueSet((0..card).map(pred).collect())
    }

    pub fn card(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, value: usize) -> bool {
        self.0[value]
    }

    pub fn insert(&mut self, value: usize) {
        self.0[value] = true;
    }

    pub fn len(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.0.iter().any(|&b| b)
    }

    /// The single member, if there is exactly one.
    pub fn only(&self) -> Option<usize> {
        let mut members = self.iter();
        match (members.next(), members.next()) {
            (Some(v), None) => Some(v),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn is_subset(&self, other: &ValueSet) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| !a || b)
    }

    pub fn union_with(&mut self, other: &ValueSet) {
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
}

impl fmt::Debug for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Whether a plausible-set map is Predict's approximation or a certified exact result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Approximate,
    CompleteCertified,
}

/// Plausible values of every variable, indexed by variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlausibleSetMap {
    sets: Vec<ValueSet>,
    provenance: Provenance,
}

impl PlausibleSetMap {
    pub fn new(sets: Vec<ValueSet>, provenance: Provenance) -> Self {
        PlausibleSetMap { sets, provenance }
    }

    pub fn get(&self, v: usize) -> &ValueSet {
        &self.sets[v]
    }

    pub fn sets(&self) -> &[ValueSet] {
        &self.sets
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub(crate) fn set_provenance(&mut self, provenance: Provenance) {
        self.provenance = provenance;
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Variables whose plausible set is a singleton, paired with that value.
    pub fn believed(&self) -> Vec<(usize, usize)> {
        self.sets
            .iter()
            .enumerate()
            .filter_map(|(v, set)| set.only().map(|value| (v, value)))
            .collect()
    }

    /// Membership-wise inclusion in `other`, for every variable.
    pub fn is_subset(&self, other: &PlausibleSetMap) -> bool {
        self.sets.iter().zip(&other.sets).all(|(a, b)| a.is_subset(b))
    }

    /// Elementwise union; the result is approximate.
    pub fn union_with(&mut self, other: &PlausibleSetMap) {
        for (a, b) in self.sets.iter_mut().zip(&other.sets) {
            a.union_with(b);
        }
    }

    /// `{variable: [plausible labels...]}` in declaration order.
    pub fn to_json(&self, structure: &NetworkStructure) -> Value {
        let mut out = Map::new();
        for (v, set) in self.sets.iter().enumerate() {
            let labels = set
                .iter()
                .map(|i| Value::from(structure.variable(v).values()[i].clone()))
                .collect();
            out.insert(structure.name(v).to_string(), Value::Array(labels));
        }
        Value::Object(out)
    }
}

/// Believed (variable, value) pairs of a plausible-set map.
pub fn believed_nodes(plsets: &PlausibleSetMap) -> Vec<(usize, usize)> {
    plsets.believed()
}

/// Family table lookups performed by a sweep, plus parent-edge visits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OpCounter {
    pub lookups: u64,
    pub edge_visits: u64,
}

impl OpCounter {
    pub fn total(&self) -> u64 {
        self.lookups + self.edge_visits
    }
}

/// Output of a Predict run.
#[derive(Clone, Debug)]
pub struct Prediction {
    pub plsets: PlausibleSetMap,
    pub ops: OpCounter,
    /// The network actually swept (after action surgery).
    pub network: KappaNetwork,
}

/// One sweep with some variables clamped to a fixed value.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub plsets: PlausibleSetMap,
    /// Clamped variables whose forced value had no rank-0 support from plausible parents.
    pub unsupported: Vec<usize>,
}

/// Predict with root evidence and action surgery.
pub fn predict(
    net: &KappaNetwork,
    evidence: &Evidence,
    actions: &ActionSet,
) -> Result<Prediction, PredictError> {
    let network = net.apply_actions(actions)?;
    let clamps = evidence_clamps(&network, evidence)?;
    let mut ops = OpCounter::default();
    let sweep = sweep(&network, &clamps, &mut ops);
    Ok(Prediction {
        plsets: sweep.plsets,
        ops,
        network,
    })
}

/// Validate root evidence and turn it into per-variable clamps.
pub fn evidence_clamps(
    net: &KappaNetwork,
    evidence: &Evidence,
) -> Result<Vec<Option<usize>>, PredictError> {
    let s = net.structure();
    let mut clamps = vec![None; s.len()];
    for (v, value) in evidence.resolve(s, "evidence")? {
        if !s.is_root(v) {
            return Err(PredictError::EvidenceOnNonRoot(s.name(v).to_string()));
        }
        if net.table(v).get(0, value).is_infinite() {
            return Err(PredictError::InconsistentEvidence {
                variable: s.name(v).to_string(),
                value: s.variable(v).values()[value].clone(),
            });
        }
        clamps[v] = Some(value);
    }
    Ok(clamps)
}

/// Merge extra clamps into evidence clamps, rejecting conflicts.
pub fn merge_clamps(
    net: &KappaNetwork,
    base: &[Option<usize>],
    extra: &[(usize, usize)],
) -> Result<Vec<Option<usize>>, PredictError> {
    let mut clamps = base.to_vec();
    for &(v, value) in extra {
        match clamps[v] {
            Some(existing) if existing != value => {
                return Err(PredictError::InconsistentClamp {
                    variable: net.structure().name(v).to_string(),
                })
            }
            _ => clamps[v] = Some(value),
        }
    }
    Ok(clamps)
}

/// The sweep itself. A clamped variable's plausible set is its forced value,
/// whatever its table says; its support is still checked and reported.
pub fn sweep(net: &KappaNetwork, clamps: &[Option<usize>], ops: &mut OpCounter) -> Sweep {
    let s = net.structure();
    let mut sets: Vec<ValueSet> = (0..s.len()).map(|v| ValueSet::empty(s.card(v))).collect();
    let mut unsupported = Vec::new();
    for &v in s.topological_order() {
        let card = s.card(v);
        let table = net.table(v);
        let mut set = ValueSet::empty(card);
        if table.parents().is_empty() {
            for value in 0..card {
                ops.lookups += 1;
                if table.get(0, value).is_zero() {
                    set.insert(value);
                }
            }
        } else {
            ops.edge_visits += table.parents().len() as u64;
            let members: Vec<Vec<usize>> = table
                .parents()
                .iter()
                .map(|&p| sets[p].iter().collect())
                .collect();
            for_each_row(table.parent_cards(), &members, |row| {
                for value in 0..card {
                    if !set.contains(value) {
                        ops.lookups += 1;
                        if table.get(row, value).is_zero() {
                            set.insert(value);
                        }
                    }
                }
            });
        }
        if let Some(forced) = clamps[v] {
            if !set.contains(forced) {
                unsupported.push(v);
            }
            set = ValueSet::singleton(card, forced);
        }
        sets[v] = set;
    }
    Sweep {
        plsets: PlausibleSetMap::new(sets, Provenance::Approximate),
        unsupported,
    }
}

/// Visit the row index of every parent instantiation drawn from `members`.
fn for_each_row(cards: &[usize], members: &[Vec<usize>], mut visit: impl FnMut(usize)) {
    if members.iter().any(Vec::is_empty) {
        return;
    }
    let mut odometer = vec![0usize; members.len()];
    loop {
        let row = odometer
            .iter()
            .zip(members)
            .zip(cards)
            .fold(0, |acc, ((&i, m), &card)| acc * card + m[i]);
        visit(row);
        let mut pos = members.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < members[pos].len() {
                break;
            }
            odometer[pos] = 0;
        }
    }
}
