//! Exact probabilities by enumerating the factored joint.

use crate::model::ProbNetwork;
use crate::worlds::{self, DEFAULT_WORLD_CAP};

use super::{InferError, Query};

/// `P(target | evidence)` by enumeration under the default world cap.
pub fn exact_query(pnet: &ProbNetwork, q: &Query) -> Result<f64, InferError> {
    exact_query_with_cap(pnet, q, DEFAULT_WORLD_CAP)
}

pub fn exact_query_with_cap(pnet: &ProbNetwork, q: &Query, cap: u64) -> Result<f64, InferError> {
    let mut fixed = vec![None; pnet.len()];
    for &(v, value) in &q.evidence {
        fixed[v] = Some(value);
    }
    let (mut num, mut den) = (0.0, 0.0);
    worlds::walk(pnet, &fixed, cap, |w, p| {
        den += p;
        if q.target_holds(w) {
            num += p;
        }
    })?;
    if den <= 0.0 {
        return Err(InferError::ZeroEvidence);
    }
    Ok(num / den)
}

/// `P(fixed)` and `P(x = v, fixed)` for every variable and value.
pub fn exact_marginals(
    pnet: &ProbNetwork,
    fixed: &[Option<usize>],
    cap: u64,
) -> Result<(f64, Vec<Vec<f64>>), InferError> {
    let s = pnet.structure();
    let mut marginals: Vec<Vec<f64>> = (0..s.len()).map(|v| vec![0.0; s.card(v)]).collect();
    let mut mass = 0.0;
    worlds::walk(pnet, fixed, cap, |w, p| {
        mass += p;
        for (v, &value) in w.iter().enumerate() {
            marginals[v][value] += p;
        }
    })?;
    Ok((mass, marginals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::{generate_and, generate_chain, Epsilon};

    #[test]
    fn chain_of_three() {
        let net = generate_chain(3, Epsilon::new(0.1).unwrap()).unwrap();
        let q = Query::new(net.structure(), vec![(2, 0)], vec![]).unwrap();
        // p1 = 0.9, p2 = 0.82, p3 = 0.82*0.9 + 0.18*0.1
        assert!((exact_query(&net, &q).unwrap() - 0.756).abs() < 1e-12);
    }

    #[test]
    fn and_of_two() {
        let net = generate_and(2, Epsilon::new(0.1).unwrap()).unwrap();
        let q = Query::new(net.structure(), vec![(2, 0)], vec![]).unwrap();
        assert!((exact_query(&net, &q).unwrap() - 0.81).abs() < 1e-12);
    }

    #[test]
    fn zero_evidence() {
        let net = generate_and(2, Epsilon::new(0.1).unwrap()).unwrap();
        // y true forces both roots true, so y ∧ ¬x1 has probability 0.
        let q = Query::new(net.structure(), vec![(1, 0)], vec![(0, 1), (2, 0)]).unwrap();
        assert!(matches!(exact_query(&net, &q), Err(InferError::ZeroEvidence)));
    }
}
