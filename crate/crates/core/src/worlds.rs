//! Depth-first enumeration of full worlds consistent with a partial assignment.
//!
//! Variables are assigned in topological order, so each family's entry is known as
//! soon as its child is assigned and dead branches (probability 0, kappa `INFINITY`)
//! are cut without affecting sums or minima.

use thiserror::Error;

use crate::model::{Kappa, Network, Quantity};

/// Default guard on the number of worlds an exact routine may enumerate.
pub const DEFAULT_WORLD_CAP: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("enumeration needs {worlds} worlds, cap is {cap}")]
pub struct WorldCapExceeded {
    pub worlds: u64,
    pub cap: u64,
}

/// How a family entry folds into a running world weight.
pub(crate) trait Weight: Quantity {
    fn unit() -> Self;
    fn extend(self, entry: Self) -> Self;
    fn is_dead(self) -> bool;
}

impl Weight for Kappa {
    fn unit() -> Self {
        Kappa::ZERO
    }
    fn extend(self, entry: Self) -> Self {
        self + entry
    }
    fn is_dead(self) -> bool {
        self.is_infinite()
    }
}

impl Weight for f64 {
    fn unit() -> Self {
        1.0
    }
    fn extend(self, entry: Self) -> Self {
        self * entry
    }
    fn is_dead(self) -> bool {
        self == 0.0
    }
}

/// Number of worlds consistent with `fixed`.
pub fn consistent_world_count<Q: Quantity>(net: &Network<Q>, fixed: &[Option<usize>]) -> u64 {
    let s = net.structure();
    s.space_size((0..s.len()).filter(|&v| fixed[v].is_none()))
}

/// Visit every live world consistent with `fixed` together with its joint weight.
pub(crate) fn walk<Q: Weight>(
    net: &Network<Q>,
    fixed: &[Option<usize>],
    cap: u64,
    mut visit: impl FnMut(&[usize], Q),
) -> Result<(), WorldCapExceeded> {
    let worlds = consistent_world_count(net, fixed);
    if worlds > cap {
        return Err(WorldCapExceeded { worlds, cap });
    }
    let order = net.structure().topological_order();
    let mut world = vec![0; net.len()];
    descend(net, order, fixed, 0, Q::unit(), &mut world, &mut visit);
    Ok(())
}

fn descend<Q: Weight>(
    net: &Network<Q>,
    order: &[usize],
    fixed: &[Option<usize>],
    depth: usize,
    weight: Q,
    world: &mut [usize],
    visit: &mut impl FnMut(&[usize], Q),
) {
    let Some(&v) = order.get(depth) else {
        visit(world, weight);
        return;
    };
    let table = net.table(v);
    let row = table.row_index_in(world);
    let mut assign = |value: usize, world: &mut [usize]| {
        let next = weight.extend(table.get(row, value));
        if !next.is_dead() {
            world[v] = value;
            descend(net, order, fixed, depth + 1, next, world, visit);
        }
    };
    match fixed[v] {
        Some(value) => assign(value, world),
        None => {
            for value in 0..net.structure().card(v) {
                assign(value, world);
            }
        }
    }
}
