//! Abstraction of probability networks to kappa networks at a real-valued ε, and the
//! two small network families used to study the abstraction error.

use thiserror::Error;

use crate::model::{Kappa, KappaNetwork, Network, NetworkStructure, ProbNetwork, Table, Variable};

#[derive(Debug, Error, PartialEq)]
pub enum AbstractionError {
    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    EpsilonOutOfRange(f64),
    #[error("network size must be at least 1")]
    EmptyNetwork,
}

/// A real ε with `0 < ε < 1`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Epsilon(f64);

impl Epsilon {
    pub fn new(value: f64) -> Result<Self, AbstractionError> {
        if value > 0.0 && value < 1.0 {
            Ok(Epsilon(value))
        } else {
            Err(AbstractionError::EpsilonOutOfRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `ε^k`, the bracket endpoints used for stratification.
    pub fn pow(self, k: u32) -> f64 {
        if k > i32::MAX as u32 {
            0.0
        } else {
            self.0.powi(k as i32)
        }
    }
}

impl TryFrom<f64> for Epsilon {
    type Error = AbstractionError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Epsilon::new(value)
    }
}

/// The integer `K` with `ε^(K+1) < p ≤ ε^K`; `INFINITY` for `p = 0`.
///
/// The log-space estimate is corrected against the same `powi` evaluation the
/// bracket is stated in, so boundary values `p = ε^K` land on `K`.
pub fn stratum(p: f64, eps: Epsilon) -> Kappa {
    if p <= 0.0 {
        return Kappa::INFINITY;
    }
    if p >= 1.0 {
        return Kappa::ZERO;
    }
    let estimate = (p.ln() / eps.value().ln()).floor();
    let mut k = if estimate.is_finite() && estimate > 0.0 {
        estimate.min(Kappa::MAX_FINITE as f64 - 1.0) as u32
    } else {
        0
    };
    while k > 0 && eps.pow(k) < p {
        k -= 1;
    }
    while k < Kappa::MAX_FINITE - 1 && eps.pow(k + 1) >= p {
        k += 1;
    }
    Kappa::finite(k)
}

/// A row whose minimum rank came out above 0 and was shifted down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowShift {
    pub child: usize,
    pub row: usize,
    pub shift: u32,
}

#[derive(Clone, Debug)]
pub struct Abstraction {
    pub network: KappaNetwork,
    pub shifts: Vec<RowShift>,
}

/// Stratify every table entry at `eps`, re-normalizing rows whose minimum exceeds 0.
pub fn epsilon_omp(pnet: &ProbNetwork, eps: Epsilon) -> Abstraction {
    let mut shifts = Vec::new();
    let tables = pnet
        .tables()
        .iter()
        .map(|t| {
            let mut table = t.map(|p| stratum(p, eps));
            let child = table.child();
            for (row, entries) in table.rows_mut().enumerate() {
                let min = entries.iter().copied().min().unwrap_or(Kappa::ZERO);
                if let Some(shift) = min.rank().filter(|&m| m > 0) {
                    for k in entries.iter_mut() {
                        *k = k.shift_down(shift);
                    }
                    shifts.push(RowShift { child, row, shift });
                }
            }
            table
        })
        .collect();
    let network = Network::new(pnet.structure().clone(), tables)
        .expect("stratified rows keep shape and are normalized");
    Abstraction { network, shifts }
}

/// Binary chain `x1 → x2 → … → xn` with `P(x1) = 1-ε`, `P(xi|x(i-1)) = 1-ε`,
/// `P(xi|¬x(i-1)) = ε`. Value 0 of each variable is the positive literal.
pub fn generate_chain(n: usize, eps: Epsilon) -> Result<ProbNetwork, AbstractionError> {
    if n == 0 {
        return Err(AbstractionError::EmptyNetwork);
    }
    let e = eps.value();
    let variables: Vec<Variable> = (1..=n).map(|i| Variable::binary(format!("x{i}"))).collect();
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    let structure = NetworkStructure::from_indices(variables, edges).expect("chain is acyclic");
    let mut tables = vec![Table::prior(0, vec![1.0 - e, e])];
    for i in 1..n {
        tables.push(Table::new(i, 2, vec![i - 1], vec![2], vec![1.0 - e, e, e, 1.0 - e]));
    }
    Ok(Network::new(structure, tables).expect("chain tables are valid"))
}

/// Roots `x1..xn` with `P(xi) = 1-ε` and `y` the deterministic AND of them.
pub fn generate_and(n: usize, eps: Epsilon) -> Result<ProbNetwork, AbstractionError> {
    if n == 0 {
        return Err(AbstractionError::EmptyNetwork);
    }
    let e = eps.value();
    let mut variables: Vec<Variable> = (1..=n).map(|i| Variable::binary(format!("x{i}"))).collect();
    variables.push(Variable::binary("y"));
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, n)).collect();
    let structure = NetworkStructure::from_indices(variables, edges).expect("star is acyclic");
    let mut tables: Vec<Table<f64>> = (0..n).map(|i| Table::prior(i, vec![1.0 - e, e])).collect();
    let rows = 1usize << n;
    let mut entries = vec![0.0; rows * 2];
    // Row 0 is the all-true parent instantiation.
    entries[0] = 1.0;
    for r in 1..rows {
        entries[2 * r + 1] = 1.0;
    }
    tables.push(Table::new(n, 2, (0..n).collect(), vec![2; n], entries));
    Ok(Network::new(structure, tables).expect("AND tables are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(v: f64) -> Epsilon {
        Epsilon::new(v).unwrap()
    }

    #[test]
    fn stratum_examples() {
        assert_eq!(stratum(0.99, eps(0.1)), Kappa::ZERO);
        assert_eq!(stratum(0.05, eps(0.1)), Kappa::ONE);
        assert_eq!(stratum(0.0, eps(0.1)), Kappa::INFINITY);
        assert_eq!(stratum(0.5, eps(0.5)), Kappa::ONE);
        assert_eq!(stratum(1.0, eps(0.5)), Kappa::ZERO);
        assert_eq!(stratum(0.1f64.powi(3), eps(0.1)), Kappa::finite(3));
    }

    #[test]
    fn epsilon_bounds() {
        assert!(Epsilon::new(0.0).is_err());
        assert!(Epsilon::new(1.0).is_err());
        assert!(Epsilon::new(f64::NAN).is_err());
        assert!(Epsilon::new(0.3).is_ok());
    }

    #[test]
    fn uniform_rows_are_shifted() {
        // Four values of 1/4 at ε = 1/4 all land in stratum 1 and must be shifted.
        let s = NetworkStructure::new(
            vec![Variable::new("x", ["a", "b", "c", "d"]).unwrap()],
            Vec::<(&str, &str)>::new(),
        )
        .unwrap();
        let p = Network::new(s, vec![Table::prior(0, vec![0.25; 4])]).unwrap();
        let abs = epsilon_omp(&p, eps(0.25));
        assert_eq!(abs.shifts, vec![RowShift { child: 0, row: 0, shift: 1 }]);
        assert!(abs.network.table(0).row(0).iter().all(|k| k.is_zero()));
    }

    #[test]
    fn chain_shape() {
        let one = generate_chain(1, eps(0.1)).unwrap();
        assert_eq!(one.len(), 1);
        assert!((one.table(0).get(0, 0) - 0.9).abs() < 1e-15);
        assert!(generate_chain(0, eps(0.1)).is_err());
    }

    #[test]
    fn and_shape() {
        let net = generate_and(3, eps(0.1)).unwrap();
        let y = net.table(3);
        assert_eq!(y.row_count(), 8);
        assert_eq!(y.row(0), &[1.0, 0.0]);
        assert!(y.rows().skip(1).all(|r| r == [0.0, 1.0]));
    }
}
