//! Exact kappa semantics by enumeration of worlds.
//!
//! Exponential on purpose: this is the ground truth the polynomial routines are
//! checked against, and it refuses to run past a world-count cap.

use thiserror::Error;

use crate::model::{Kappa, KappaNetwork, NetworkStructure};
use crate::predict::ValueSet;
use crate::worlds::{self, WorldCapExceeded, DEFAULT_WORLD_CAP};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Cap(#[from] WorldCapExceeded),
    #[error("conditioning event has rank INFINITY")]
    ImpossibleCondition,
    #[error("assignment mentions variable {0} twice with different values")]
    Inconsistent(usize),
}

/// Joint rank of a full world: the sum of its family entries.
pub fn joint_kappa(net: &KappaNetwork, world: &[usize]) -> Kappa {
    net.tables().iter().map(|t| t.lookup(world)).sum()
}

/// Brute-force ranking queries over a kappa network.
#[derive(Debug, Clone, Copy)]
pub struct KappaOracle<'a> {
    net: &'a KappaNetwork,
    cap: u64,
}

impl<'a> KappaOracle<'a> {
    pub fn new(net: &'a KappaNetwork) -> Self {
        KappaOracle {
            net,
            cap: DEFAULT_WORLD_CAP,
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn network(&self) -> &'a KappaNetwork {
        self.net
    }

    fn fixed(&self, given: &[(usize, usize)]) -> Result<Vec<Option<usize>>, OracleError> {
        let mut fixed = vec![None; self.net.len()];
        for &(v, value) in given {
            match fixed[v] {
                Some(existing) if existing != value => return Err(OracleError::Inconsistent(v)),
                _ => fixed[v] = Some(value),
            }
        }
        Ok(fixed)
    }

    /// `κ(event)` where the event is an arbitrary predicate over worlds (property 1).
    pub fn event_kappa(&self, event: impl Fn(&[usize]) -> bool) -> Result<Kappa, OracleError> {
        let mut best = Kappa::INFINITY;
        worlds::walk(self.net, &vec![None; self.net.len()], self.cap, |w, k| {
            if k < best && event(w) {
                best = k;
            }
        })?;
        Ok(best)
    }

    /// `κ(assignment)` for a conjunction of (variable, value) literals.
    pub fn conjunction_kappa(&self, literals: &[(usize, usize)]) -> Result<Kappa, OracleError> {
        let fixed = match self.fixed(literals) {
            Ok(f) => f,
            Err(OracleError::Inconsistent(_)) => return Ok(Kappa::INFINITY),
            Err(e) => return Err(e),
        };
        let mut best = Kappa::INFINITY;
        worlds::walk(self.net, &fixed, self.cap, |_, k| best = best.min(k))?;
        Ok(best)
    }

    /// `κ(partial | given) = κ(partial ∧ given) - κ(given)` (property 4).
    pub fn marginal_kappa(
        &self,
        partial: &[(usize, usize)],
        given: &[(usize, usize)],
    ) -> Result<Kappa, OracleError> {
        let prior = self.conjunction_kappa(given)?;
        if prior.is_infinite() {
            return Err(OracleError::ImpossibleCondition);
        }
        let both: Vec<(usize, usize)> = partial.iter().chain(given).copied().collect();
        let joint = self.conjunction_kappa(&both)?;
        Ok(joint.checked_sub(prior).expect("joint rank never below its condition"))
    }

    /// `κ(x = v | given)` for every variable and value, in one enumeration.
    pub fn marginals(&self, given: &[(usize, usize)]) -> Result<Vec<Vec<Kappa>>, OracleError> {
        let s = self.net.structure();
        let fixed = self.fixed(given)?;
        let mut ranks: Vec<Vec<Kappa>> = (0..s.len()).map(|v| vec![Kappa::INFINITY; s.card(v)]).collect();
        let mut floor = Kappa::INFINITY;
        worlds::walk(self.net, &fixed, self.cap, |w, k| {
            floor = floor.min(k);
            for (v, &value) in w.iter().enumerate() {
                let slot = &mut ranks[v][value];
                *slot = (*slot).min(k);
            }
        })?;
        if floor.is_infinite() {
            return Err(OracleError::ImpossibleCondition);
        }
        for row in &mut ranks {
            for k in row.iter_mut() {
                *k = k.checked_sub(floor).expect("floor is the minimum");
            }
        }
        Ok(ranks)
    }

    /// Values `v` of `variable` with `κ(variable = v | given) = 0`.
    pub fn exact_plausible_set(
        &self,
        variable: usize,
        given: &[(usize, usize)],
    ) -> Result<ValueSet, OracleError> {
        Ok(zero_set(&self.marginals(given)?[variable]))
    }

    /// Exact plausible sets of every variable.
    pub fn exact_plausible_sets(&self, given: &[(usize, usize)]) -> Result<Vec<ValueSet>, OracleError> {
        Ok(self.marginals(given)?.iter().map(|row| zero_set(row)).collect())
    }

    /// Irrelevance of a variable set: every instantiation whose per-variable marginals
    /// are all 0 must itself have joint rank 0.
    pub fn is_irrelevant(&self, vars: &[usize]) -> Result<bool, OracleError> {
        let marginals = self.marginals(&[])?;
        let s: &NetworkStructure = self.net.structure();
        let plausible: Vec<Vec<usize>> = vars
            .iter()
            .map(|&v| (0..s.card(v)).filter(|&i| marginals[v][i].is_zero()).collect())
            .collect();
        // Joint zero-rank instantiations of `vars`, gathered in one pass.
        let mut seen = std::collections::HashSet::new();
        worlds::walk(self.net, &vec![None; s.len()], self.cap, |w, k| {
            if k.is_zero() {
                seen.insert(vars.iter().map(|&v| w[v]).collect::<Vec<_>>());
            }
        })?;
        let mut odometer = vec![0usize; vars.len()];
        loop {
            let inst: Vec<usize> = odometer.iter().zip(&plausible).map(|(&i, p)| p[i]).collect();
            if !seen.contains(&inst) {
                return Ok(false);
            }
            let mut pos = vars.len();
            loop {
                if pos == 0 {
                    return Ok(true);
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < plausible[pos].len() {
                    break;
                }
                odometer[pos] = 0;
            }
        }
    }
}

fn zero_set(row: &[Kappa]) -> ValueSet {
    ValueSet::from_predicate(row.len(), |i| row[i].is_zero())
}
